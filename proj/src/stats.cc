#include "fme/stats.h"

#include <algorithm>
#include <cmath>

#include "fme/error.h"

namespace fme {

double Mean(std::span<const double> values) {
  if (values.empty()) throw ComputationError("mean of an empty set");
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleSd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double SortedQuantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ComputationError("quantile of an empty set");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("quantile probability must lie in [0, 1]");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double Quantile(std::span<const double> values, double p) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return SortedQuantile(sorted, p);
}

double Median(std::span<const double> values) { return Quantile(values, 0.5); }

double MedianAbsDeviation(std::span<const double> values) {
  const double med = Median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::fabs(v - med));
  return Median(dev);
}

ColumnStats ComputeColumnStats(const Dataset& data, std::string_view feature) {
  const Column& col = data.column(feature);
  if (!col.is_numeric()) {
    throw ValidationError("feature '" + std::string(feature) +
                          "' is categorical; statistics need a numeric feature");
  }
  if (col.size() < 2) {
    throw ValidationError("feature '" + std::string(feature) +
                          "' needs at least 2 rows for a standard deviation");
  }
  std::vector<double> sorted(col.values().begin(), col.values().end());
  std::sort(sorted.begin(), sorted.end());
  ColumnStats s;
  s.mean = Mean(col.values());
  s.sd = SampleSd(col.values());
  s.q25 = SortedQuantile(sorted, 0.25);
  s.q75 = SortedQuantile(sorted, 0.75);
  s.iqr = s.q75 - s.q25;
  s.median_abs_dev = MedianAbsDeviation(sorted);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

FeatureEnvelope ComputeEnvelope(const Dataset& data,
                                const std::vector<std::string>& features) {
  FeatureEnvelope env;
  for (const auto& f : features) {
    const Column& col = data.column(f);
    if (col.is_numeric()) {
      auto [lo, hi] = std::minmax_element(col.values().begin(), col.values().end());
      env.numeric[f] = Range{*lo, *hi};
    } else {
      auto levels = col.ObservedLevels();
      env.categorical[f] = std::set<std::string>(levels.begin(), levels.end());
    }
  }
  return env;
}

FeatureEnvelope ComputeEnvelope(const Dataset& data) {
  return ComputeEnvelope(data, data.FeatureNames());
}

}  // namespace fme
