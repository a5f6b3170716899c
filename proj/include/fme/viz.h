#ifndef FME_VIZ_H_
#define FME_VIZ_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fme/dataset.h"
#include "fme/fme.h"
#include "fme/partition.h"
#include "json.hpp"

namespace fme {

struct HexPoint {
  double u = 0;
  double v = 0;
  double fme = 0;
  std::optional<double> nlm;
};

// One occupied cell. `u`, `v` is the cell center in data coordinates;
// mean_nlm averages the members' NLMs clamped at 0 (undefined ones skipped).
struct HexBin {
  double u = 0;
  double v = 0;
  // Axial lattice coordinates.
  int q = 0;
  int r = 0;
  std::size_t count = 0;
  double mean_fme = 0;
  std::optional<double> mean_nlm;
};

// Pointy-top hexagonal binning. Both axes are scaled to [0, 1] over the
// bounding box of the points (a zero-width axis maps to 0) and the lattice has
// `resolution` hexagons across each axis. Points go to the nearest center
// (cube rounding). Bins are ordered by (r, q).
std::vector<HexBin> Hexbin(std::span<const HexPoint> points, std::size_t resolution = 20);

// Equal-width histogram; bin i covers [start + i width, start + (i+1) width),
// the last bin also includes its right edge.
struct Histogram {
  double start = 0;
  double width = 1;
  std::vector<std::size_t> counts;
};

// Freedman-Diaconis width 2 IQR / n^(1/3), at most `max_bins` bins. Constant
// or IQR-free data gets bins of width 1 (or range / max_bins).
Histogram FreedmanDiaconis(std::span<const double> values, std::size_t max_bins = 200);

enum class PlotKind { kUnivariate, kBivariate, kHigherOrder, kCategorical, kPartitionTree };
std::string_view PlotKindName(PlotKind kind);

struct StepArrow {
  std::string feature;
  double step = 0;
};

struct PlotData {
  PlotKind kind = PlotKind::kUnivariate;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::size_t n = 0;
  double ame = 0;
  std::vector<StepArrow> arrows;
  std::vector<HexBin> bins;
  // Hexbin lattice: resolution and the bounding box the lattice spans.
  std::size_t resolution = 0;
  double u_min = 0;
  double u_max = 0;
  double v_min = 0;
  double v_max = 0;
  // Centered moving average of FMEs over the feature (univariate).
  std::vector<std::pair<double, double>> smoother;
  std::optional<Histogram> fme_histogram;
  std::optional<Histogram> nlm_histogram;  // NLMs clamped at 0
  std::optional<double> anlm;              // raw mean
  std::optional<double> anlm_display;      // mean after clamping at 0
  nlohmann::ordered_json tree;             // partition_tree payload
};

struct PlotOptions {
  std::size_t resolution = 20;
  bool smoother = true;
  std::size_t smoother_points = 50;
  // Window width as a fraction of the feature range.
  double smoother_window = 0.1;
};

// Points (x, fme) where x is the observed feature value.
PlotData UnivariatePlotData(const FmeResultSet& results, const Dataset& data,
                            const PlotOptions& options = {});
// Points (x1, x2) colored by FME; carries mean_nlm per bin when present.
PlotData BivariatePlotData(const FmeResultSet& results, const Dataset& data,
                           const PlotOptions& options = {});
PlotData HigherOrderPlotData(const FmeResultSet& results);
PlotData CategoricalPlotData(const FmeResultSet& results);
PlotData PartitionPlotData(const PartitionTree& tree);
// Picks the plot kind from the step: categorical, or by feature count.
PlotData PlotForResults(const FmeResultSet& results, const Dataset& data,
                        const PlotOptions& options = {});

// Centered moving average of y over x at `points` equally spaced positions;
// positions whose window holds no point are skipped.
std::vector<std::pair<double, double>> MovingAverage(std::span<const double> x,
                                                     std::span<const double> y,
                                                     std::size_t points, double window);

nlohmann::ordered_json PlotDataJson(const PlotData& plot);
// u,v,q,r,count,mean_fme,mean_nlm
std::string HexBinsCsv(std::span<const HexBin> bins);

}  // namespace fme

#endif  // FME_VIZ_H_
