#ifndef FME_NLM_H_
#define FME_NLM_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fme/dataset.h"
#include "fme/predictor.h"

namespace fme {

struct NlmSettings {
  // Composite Simpson 3/8 panels; each path is evaluated at 3n+1 points.
  std::size_t n_subintervals = 4;
};

// Path parameters t_k = k / (3n), k = 0..3n.
std::vector<double> NlmGrid(const NlmSettings& settings);

// NLM from predictions along the path γ(t_k) = x + t_k h.
//
// With secant g(t) = f(x) + t (f(x+h) - f(x)) and f_mean = ∫ f(γ(t)) dt:
//   NLM = 1 - ∫ (f(γ) - g)^2 dt / ∫ (f(γ) - f_mean)^2 dt.
// Returns nullopt when the denominator is below 1e-12 max(1, f(x)^2) while
// the numerator is not; when both are below it the path is linear and the
// result is 1.
std::optional<double> NlmFromPath(std::span<const double> path_predictions);

// Path predictions for one row of `data` and a numeric step, one batch call.
std::vector<double> PredictPath(const Predictor& model, const Dataset& data,
                                std::size_t row,
                                const std::vector<std::pair<std::string, double>>& step,
                                const NlmSettings& settings);

// Convenience wrapper: NlmFromPath(PredictPath(...)).
std::optional<double> ComputeNlm(const Predictor& model, const Dataset& data,
                                 std::size_t row,
                                 const std::vector<std::pair<std::string, double>>& step,
                                 const NlmSettings& settings = {});

}  // namespace fme

#endif  // FME_NLM_H_
