#include "fme/nlm.h"

#include <algorithm>
#include <cmath>

#include "fme/error.h"
#include "fme/quadrature.h"

namespace fme {

std::vector<double> NlmGrid(const NlmSettings& settings) {
  if (settings.n_subintervals < 1) {
    throw ValidationError("NLM needs at least one quadrature panel");
  }
  const std::size_t n = 3 * settings.n_subintervals;
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    t[k] = static_cast<double>(k) / static_cast<double>(n);
  }
  return t;
}

std::optional<double> NlmFromPath(std::span<const double> f) {
  if (f.size() < 4 || (f.size() - 1) % 3 != 0) {
    throw ValidationError("NLM path needs 3n+1 predictions");
  }
  for (double v : f) {
    if (!std::isfinite(v)) throw ComputationError("non-finite prediction on NLM path");
  }
  const std::size_t n = f.size() - 1;
  const double fx = f.front();
  const double fme = f.back() - fx;
  const double mean = Simpson38Samples(f, 0.0, 1.0);
  std::vector<double> secant_sq(f.size()), mean_sq(f.size());
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(n);
    const double a = f[k] - (fx + t * fme);
    const double b = f[k] - mean;
    secant_sq[k] = a * a;
    mean_sq[k] = b * b;
  }
  const double num = Simpson38Samples(secant_sq, 0.0, 1.0);
  const double den = Simpson38Samples(mean_sq, 0.0, 1.0);
  const double tiny = 1e-12 * std::max(1.0, fx * fx);
  if (den < tiny) {
    if (num < tiny) return 1.0;
    return std::nullopt;
  }
  return 1.0 - num / den;
}

std::vector<double> PredictPath(const Predictor& model, const Dataset& data,
                                std::size_t row,
                                const std::vector<std::pair<std::string, double>>& step,
                                const NlmSettings& settings) {
  const auto t = NlmGrid(settings);
  const std::size_t one[] = {row};
  Dataset path = data.Repeat(one, t.size());
  for (const auto& [name, h] : step) {
    const double x = data.column(name).values()[row];
    std::vector<double> values(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) values[k] = x + t[k] * h;
    path.SetNumeric(name, std::move(values));
  }
  return model.Predict(path);
}

std::optional<double> ComputeNlm(const Predictor& model, const Dataset& data,
                                 std::size_t row,
                                 const std::vector<std::pair<std::string, double>>& step,
                                 const NlmSettings& settings) {
  return NlmFromPath(PredictPath(model, data, row, step, settings));
}

}  // namespace fme
