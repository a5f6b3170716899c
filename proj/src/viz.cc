#include "fme/viz.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "fme/aggregate.h"
#include "fme/error.h"
#include "fme/stats.h"

namespace fme {
namespace {

struct Cell {
  std::size_t count = 0;
  double fme_sum = 0;
  std::size_t nlm_count = 0;
  double nlm_sum = 0;
};

std::pair<int, int> CubeRound(double qf, double rf) {
  const double sf = -qf - rf;
  double q = std::round(qf), r = std::round(rf);
  const double s = std::round(sf);
  const double dq = std::abs(q - qf), dr = std::abs(r - rf), ds = std::abs(s - sf);
  if (dq > dr && dq > ds) {
    q = -r - s;
  } else if (dr > ds) {
    r = -q - s;
  }
  return {static_cast<int>(q), static_cast<int>(r)};
}

double Unit(double x, double lo, double span) { return span > 0 ? (x - lo) / span : 0.0; }

std::vector<HexPoint> RetainedPoints(const FmeResultSet& results, const Dataset& data,
                                     const std::string& u_feature,
                                     const std::string* v_feature) {
  const auto u = data.column(u_feature).values();
  std::span<const double> v;
  if (v_feature) v = data.column(*v_feature).values();
  std::vector<HexPoint> points;
  for (const FmeRow& row : results.rows()) {
    if (row.extrapolation) continue;
    if (row.row >= data.n_rows()) {
      throw ValidationError("FME results do not belong to this dataset");
    }
    points.push_back({u[row.row], v_feature ? v[row.row] : row.fme, row.fme, row.nlm});
  }
  if (points.empty()) throw ComputationError("nothing to plot: no retained FMEs");
  return points;
}

void SetLattice(std::span<const HexPoint> points, std::size_t resolution, PlotData& plot) {
  plot.resolution = resolution;
  plot.u_min = plot.u_max = points[0].u;
  plot.v_min = plot.v_max = points[0].v;
  for (const auto& p : points) {
    plot.u_min = std::min(plot.u_min, p.u);
    plot.u_max = std::max(plot.u_max, p.u);
    plot.v_min = std::min(plot.v_min, p.v);
    plot.v_max = std::max(plot.v_max, p.v);
  }
}

void AddNlmSummary(const FmeResultSet& results, PlotData& plot) {
  const auto nlms = results.retained_nlms();
  if (!results.has_nlm() || nlms.empty()) return;
  std::vector<double> clamped;
  clamped.reserve(nlms.size());
  for (double v : nlms) clamped.push_back(std::max(0.0, v));
  plot.anlm = Mean(nlms);
  plot.anlm_display = Mean(clamped);
}

std::vector<StepArrow> Arrows(const StepSpec& step) {
  std::vector<StepArrow> arrows;
  if (!step.is_numeric()) return arrows;
  for (const auto& [name, h] : step.numeric().steps) arrows.push_back({name, h});
  return arrows;
}

std::string StepTitle(const StepSpec& step) {
  std::string title;
  if (!step.is_numeric()) {
    return step.categorical().feature + " -> " + step.categorical().reference;
  }
  for (const auto& [name, h] : step.numeric().steps) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%+g", name.c_str(), h);
    title += (title.empty() ? "" : ", ") + std::string(buf);
  }
  return title;
}

}  // namespace

std::vector<HexBin> Hexbin(std::span<const HexPoint> points, std::size_t resolution) {
  if (resolution < 1) throw ValidationError("hexbin resolution must be at least 1");
  if (points.empty()) return {};
  double ulo = points[0].u, uhi = ulo, vlo = points[0].v, vhi = vlo;
  for (const auto& p : points) {
    ulo = std::min(ulo, p.u);
    uhi = std::max(uhi, p.u);
    vlo = std::min(vlo, p.v);
    vhi = std::max(vhi, p.v);
  }
  const double uspan = uhi - ulo, vspan = vhi - vlo;
  const double sqrt3 = std::numbers::sqrt3;
  const double size = 1.0 / (static_cast<double>(resolution) * sqrt3);
  std::map<std::pair<int, int>, Cell> cells;  // keyed (r, q)
  for (const auto& p : points) {
    const double x = Unit(p.u, ulo, uspan), y = Unit(p.v, vlo, vspan);
    const auto [q, r] = CubeRound((sqrt3 / 3.0 * x - y / 3.0) / size, (2.0 / 3.0 * y) / size);
    Cell& c = cells[{r, q}];
    ++c.count;
    c.fme_sum += p.fme;
    if (p.nlm) {
      ++c.nlm_count;
      c.nlm_sum += std::max(0.0, *p.nlm);
    }
  }
  std::vector<HexBin> bins;
  bins.reserve(cells.size());
  for (const auto& [key, c] : cells) {
    const auto [r, q] = key;
    const double x = size * sqrt3 * (q + r / 2.0);
    const double y = size * 1.5 * r;
    HexBin b;
    b.q = q;
    b.r = r;
    b.u = ulo + x * uspan;
    b.v = vlo + y * vspan;
    b.count = c.count;
    b.mean_fme = c.fme_sum / static_cast<double>(c.count);
    if (c.nlm_count > 0) b.mean_nlm = c.nlm_sum / static_cast<double>(c.nlm_count);
    bins.push_back(b);
  }
  return bins;
}

Histogram FreedmanDiaconis(std::span<const double> values, std::size_t max_bins) {
  if (values.empty()) throw ComputationError("histogram of an empty set");
  if (max_bins < 1) throw ValidationError("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  Histogram h;
  if (!(hi > lo)) {
    h.start = lo - 0.5;
    h.width = 1.0;
    h.counts = {values.size()};
    return h;
  }
  const double n = static_cast<double>(values.size());
  const double iqr = Quantile(values, 0.75) - Quantile(values, 0.25);
  std::size_t n_bins;
  if (iqr > 0) {
    const double fd = 2.0 * iqr / std::cbrt(n);
    n_bins = static_cast<std::size_t>(std::ceil((hi - lo) / fd));
  } else {
    n_bins = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
  }
  n_bins = std::clamp<std::size_t>(n_bins, 1, max_bins);
  h.start = lo;
  h.width = (hi - lo) / static_cast<double>(n_bins);
  h.counts.assign(n_bins, 0);
  for (double v : values) {
    auto i = static_cast<std::size_t>(std::floor((v - lo) / h.width));
    ++h.counts[std::min(i, n_bins - 1)];
  }
  return h;
}

std::string_view PlotKindName(PlotKind kind) {
  switch (kind) {
    case PlotKind::kUnivariate:
      return "univariate";
    case PlotKind::kBivariate:
      return "bivariate";
    case PlotKind::kHigherOrder:
      return "higher_order";
    case PlotKind::kCategorical:
      return "categorical";
    case PlotKind::kPartitionTree:
      return "partition_tree";
  }
  return "unknown";
}

std::vector<std::pair<double, double>> MovingAverage(std::span<const double> x,
                                                     std::span<const double> y,
                                                     std::size_t points, double window) {
  if (x.size() != y.size()) throw ValidationError("smoother needs paired values");
  if (x.empty() || points == 0) return {};
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it, hi = *hi_it;
  const std::size_t m = hi > lo ? points : 1;
  const double half = window / 2.0;
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < m; ++i) {
    const double at =
        m == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::abs(x[j] - at) <= half) {
        sum += y[j];
        ++count;
      }
    }
    if (count > 0) out.emplace_back(at, sum / static_cast<double>(count));
  }
  return out;
}

PlotData UnivariatePlotData(const FmeResultSet& results, const Dataset& data,
                            const PlotOptions& options) {
  const StepSpec& step = results.step();
  if (!step.is_numeric() || step.numeric().steps.size() != 1) {
    throw ValidationError("univariate plots need a numeric step on one feature");
  }
  const std::string& feature = step.numeric().steps[0].first;
  const auto points = RetainedPoints(results, data, feature, nullptr);
  PlotData plot;
  plot.kind = PlotKind::kUnivariate;
  plot.title = "FME " + StepTitle(step);
  plot.x_label = feature;
  plot.y_label = "FME";
  plot.n = points.size();
  plot.ame = Ame(results);
  plot.arrows = Arrows(step);
  plot.bins = Hexbin(points, options.resolution);
  SetLattice(points, options.resolution, plot);
  if (options.smoother) {
    std::vector<double> x, y;
    for (const auto& p : points) {
      x.push_back(p.u);
      y.push_back(p.fme);
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    plot.smoother = MovingAverage(x, y, options.smoother_points,
                                  options.smoother_window * (*hi - *lo));
  }
  AddNlmSummary(results, plot);
  return plot;
}

PlotData BivariatePlotData(const FmeResultSet& results, const Dataset& data,
                           const PlotOptions& options) {
  const StepSpec& step = results.step();
  if (!step.is_numeric() || step.numeric().steps.size() != 2) {
    throw ValidationError("bivariate plots need a numeric step on two features");
  }
  const std::string& first = step.numeric().steps[0].first;
  const std::string& second = step.numeric().steps[1].first;
  const auto points = RetainedPoints(results, data, first, &second);
  PlotData plot;
  plot.kind = PlotKind::kBivariate;
  plot.title = "FME " + StepTitle(step);
  plot.x_label = first;
  plot.y_label = second;
  plot.n = points.size();
  plot.ame = Ame(results);
  plot.arrows = Arrows(step);
  plot.bins = Hexbin(points, options.resolution);
  SetLattice(points, options.resolution, plot);
  AddNlmSummary(results, plot);
  return plot;
}

PlotData HigherOrderPlotData(const FmeResultSet& results) {
  const StepSpec& step = results.step();
  if (!step.is_numeric()) throw ValidationError("higher-order plots need a numeric step");
  const auto fmes = results.retained_fmes();
  if (fmes.empty()) throw ComputationError("nothing to plot: no retained FMEs");
  PlotData plot;
  plot.kind = PlotKind::kHigherOrder;
  plot.title = "FME " + StepTitle(step);
  plot.x_label = "FME";
  plot.y_label = "count";
  plot.n = fmes.size();
  plot.ame = Ame(results);
  plot.arrows = Arrows(step);
  plot.fme_histogram = FreedmanDiaconis(fmes);
  AddNlmSummary(results, plot);
  if (plot.anlm) {
    std::vector<double> clamped;
    for (double v : results.retained_nlms()) clamped.push_back(std::max(0.0, v));
    plot.nlm_histogram = FreedmanDiaconis(clamped);
  }
  return plot;
}

PlotData CategoricalPlotData(const FmeResultSet& results) {
  const StepSpec& step = results.step();
  if (step.is_numeric()) throw ValidationError("categorical plots need a categorical step");
  const auto fmes = results.retained_fmes();
  if (fmes.empty()) throw ComputationError("nothing to plot: no retained FMEs");
  PlotData plot;
  plot.kind = PlotKind::kCategorical;
  plot.title = "FME " + StepTitle(step);
  plot.x_label = "FME";
  plot.y_label = "count";
  plot.n = fmes.size();
  plot.ame = Ame(results);
  plot.fme_histogram = FreedmanDiaconis(fmes);
  return plot;
}

PlotData PartitionPlotData(const PartitionTree& tree) {
  PlotData plot;
  plot.kind = PlotKind::kPartitionTree;
  plot.title = "Partitioning (" + tree.method() + ")";
  plot.n = tree.root().n();
  plot.ame = tree.global_ame();
  plot.tree = PartitionJson(tree);
  return plot;
}

PlotData PlotForResults(const FmeResultSet& results, const Dataset& data,
                        const PlotOptions& options) {
  const StepSpec& step = results.step();
  if (!step.is_numeric()) return CategoricalPlotData(results);
  switch (step.numeric().steps.size()) {
    case 1:
      return UnivariatePlotData(results, data, options);
    case 2:
      return BivariatePlotData(results, data, options);
    default:
      return HigherOrderPlotData(results);
  }
}

namespace {

nlohmann::ordered_json HistogramJson(const Histogram& h) {
  return {{"start", h.start}, {"width", h.width}, {"counts", h.counts}};
}

}  // namespace

nlohmann::ordered_json PlotDataJson(const PlotData& plot) {
  using Json = nlohmann::ordered_json;
  Json doc;
  doc["kind"] = std::string(PlotKindName(plot.kind));
  doc["title"] = plot.title;
  doc["x_label"] = plot.x_label;
  doc["y_label"] = plot.y_label;
  doc["n"] = plot.n;
  doc["ame"] = plot.ame;
  if (plot.anlm) doc["anlm"] = *plot.anlm;
  if (plot.anlm_display) doc["anlm_display"] = *plot.anlm_display;
  Json arrows = Json::array();
  for (const auto& a : plot.arrows) arrows.push_back({{"feature", a.feature}, {"step", a.step}});
  doc["arrows"] = std::move(arrows);
  if (!plot.bins.empty()) {
    doc["lattice"] = {{"resolution", plot.resolution}, {"u_min", plot.u_min},
                      {"u_max", plot.u_max}, {"v_min", plot.v_min}, {"v_max", plot.v_max}};
    Json bins = Json::array();
    for (const auto& b : plot.bins) {
      Json j{{"u", b.u}, {"v", b.v}, {"q", b.q}, {"r", b.r}, {"count", b.count},
             {"mean_fme", b.mean_fme}};
      j["mean_nlm"] = b.mean_nlm ? Json(*b.mean_nlm) : Json(nullptr);
      bins.push_back(std::move(j));
    }
    doc["bins"] = std::move(bins);
  }
  if (!plot.smoother.empty()) {
    Json line = Json::array();
    for (const auto& [x, y] : plot.smoother) line.push_back(Json::array({x, y}));
    doc["smoother"] = std::move(line);
  }
  if (plot.fme_histogram) doc["fme_histogram"] = HistogramJson(*plot.fme_histogram);
  if (plot.nlm_histogram) doc["nlm_histogram"] = HistogramJson(*plot.nlm_histogram);
  if (!plot.tree.is_null()) doc["tree"] = plot.tree;
  return doc;
}

std::string HexBinsCsv(std::span<const HexBin> bins) {
  std::string out = "u,v,q,r,count,mean_fme,mean_nlm\n";
  for (const auto& b : bins) {
    out += FormatDouble17(b.u) + "," + FormatDouble17(b.v) + "," + std::to_string(b.q) +
           "," + std::to_string(b.r) + "," + std::to_string(b.count) + "," +
           FormatDouble17(b.mean_fme) + "," +
           (b.mean_nlm ? FormatDouble17(*b.mean_nlm) : std::string("NA")) + "\n";
  }
  return out;
}

}  // namespace fme
