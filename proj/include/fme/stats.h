#ifndef FME_STATS_H_
#define FME_STATS_H_

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fme/dataset.h"

namespace fme {

double Mean(std::span<const double> values);

// Sample standard deviation (n - 1 denominator). Zero for fewer than 2 values.
double SampleSd(std::span<const double> values);

// Quantile by linear interpolation between the closest order statistics
// (Hyndman-Fan type 7): h = (n - 1) p, Q = x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]).
double Quantile(std::span<const double> values, double p);
// Same on data that is already sorted ascending.
double SortedQuantile(std::span<const double> sorted, double p);

double Median(std::span<const double> values);
// Median of |x - median(x)|, unscaled.
double MedianAbsDeviation(std::span<const double> values);

struct ColumnStats {
  double mean = 0;
  double sd = 0;
  double q25 = 0;
  double q75 = 0;
  double iqr = 0;
  double median_abs_dev = 0;
  double min = 0;
  double max = 0;
};

// Requires a numeric feature with at least 2 rows.
ColumnStats ComputeColumnStats(const Dataset& data, std::string_view feature);

struct Range {
  double min = 0;
  double max = 0;
  bool Contains(double x) const { return x >= min && x <= max; }
};

// Axis-aligned box of observed values: (min, max) per numeric feature and
// the observed level set per categorical feature.
struct FeatureEnvelope {
  std::map<std::string, Range, std::less<>> numeric;
  std::map<std::string, std::set<std::string>, std::less<>> categorical;
};

FeatureEnvelope ComputeEnvelope(const Dataset& data,
                                const std::vector<std::string>& features);
// Envelope over every column except the target.
FeatureEnvelope ComputeEnvelope(const Dataset& data);

}  // namespace fme

#endif  // FME_STATS_H_
