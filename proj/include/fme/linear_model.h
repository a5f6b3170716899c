#ifndef FME_LINEAR_MODEL_H_
#define FME_LINEAR_MODEL_H_

#include <string>
#include <vector>

#include "fme/dataset.h"
#include "fme/predictor.h"

namespace fme {

// intercept + sum_j beta_j x_j + offset[level] per categorical feature.
// Categorical features use dummy coding with the first level as baseline
// (offset 0). Unseen levels also map to offset 0.
class LinearModel : public Predictor {
 public:
  // `coefficients[f]` is used for numeric features; `level_offsets[f]` (one
  // entry per level) for categorical ones. Both vectors are indexed by schema
  // position and entries for the other kind are ignored.
  LinearModel(std::vector<FeatureSpec> schema, std::string target,
              double intercept, std::vector<double> coefficients,
              std::vector<std::vector<double>> level_offsets);

  std::string_view kind() const override { return "linear"; }

  double intercept() const { return intercept_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::vector<std::vector<double>>& level_offsets() const {
    return level_offsets_;
  }
  double coefficient(std::string_view feature) const;

 protected:
  void PredictBound(const BoundRows& rows, std::span<double> out) const override;
  bool handles_unseen_levels() const override { return true; }

 private:
  double intercept_;
  std::vector<double> coefficients_;
  std::vector<std::vector<double>> level_offsets_;
};

// Ordinary least squares on all non-target columns (or `features`).
LinearModel TrainLinear(const Dataset& data, const std::string& target,
                        std::vector<std::string> features = {});

}  // namespace fme

#endif  // FME_LINEAR_MODEL_H_
