#include "fme/linear_model.h"

#include <Eigen/Dense>

#include "fme/error.h"

namespace fme {

LinearModel::LinearModel(std::vector<FeatureSpec> schema, std::string target,
                         double intercept, std::vector<double> coefficients,
                         std::vector<std::vector<double>> level_offsets)
    : Predictor(std::move(schema), std::move(target)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)),
      level_offsets_(std::move(level_offsets)) {
  const auto n = this->schema().size();
  coefficients_.resize(n, 0.0);
  level_offsets_.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    const FeatureSpec& spec = this->schema()[f];
    if (spec.kind == ColumnKind::kCategorical) {
      auto& offsets = level_offsets_[f];
      if (offsets.empty()) offsets.assign(spec.levels.size(), 0.0);
      if (offsets.size() != spec.levels.size()) {
        throw ValidationError("linear model: feature '" + spec.name +
                              "' needs one offset per level");
      }
    }
  }
}

double LinearModel::coefficient(std::string_view feature) const {
  for (std::size_t f = 0; f < schema().size(); ++f) {
    if (schema()[f].name == feature) return coefficients_[f];
  }
  throw ValidationError("linear model has no feature '" + std::string(feature) + "'");
}

void LinearModel::PredictBound(const BoundRows& rows, std::span<double> out) const {
  const auto& spec = schema();
  for (std::size_t r = 0; r < rows.n_rows(); ++r) {
    double y = intercept_;
    for (std::size_t f = 0; f < spec.size(); ++f) {
      if (spec[f].kind == ColumnKind::kNumeric) {
        y += coefficients_[f] * rows.numeric(f, r);
      } else {
        const int32_t level = rows.level(f, r);
        if (level >= 0) y += level_offsets_[f][level];
      }
    }
    out[r] = y;
  }
}

LinearModel TrainLinear(const Dataset& data, const std::string& target,
                        std::vector<std::string> features) {
  const Column& y_col = data.column(target);
  if (!y_col.is_numeric()) {
    throw ValidationError("target '" + target + "' must be numeric");
  }
  if (features.empty()) {
    for (const auto& c : data.columns()) {
      if (c.name() != target) features.push_back(c.name());
    }
  }
  auto schema = SchemaFromDataset(data, features);

  // Design matrix: intercept, numeric features, dummies for levels 1..L-1.
  Eigen::Index n_params = 1;
  for (const auto& s : schema) {
    n_params += s.kind == ColumnKind::kNumeric
                    ? 1
                    : static_cast<Eigen::Index>(s.levels.size()) - 1;
  }
  const auto n = static_cast<Eigen::Index>(data.n_rows());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n_params);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) y(r) = y_col.values()[r];
  x.col(0).setOnes();
  Eigen::Index col = 1;
  for (const auto& s : schema) {
    const Column& c = data.column(s.name);
    if (s.kind == ColumnKind::kNumeric) {
      for (Eigen::Index r = 0; r < n; ++r) x(r, col) = c.values()[r];
      ++col;
    } else {
      for (Eigen::Index r = 0; r < n; ++r) {
        const int32_t code = c.codes()[r];
        if (code > 0) x(r, col + code - 1) = 1.0;
      }
      col += static_cast<Eigen::Index>(s.levels.size()) - 1;
    }
  }
  const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);

  std::vector<double> coefficients(schema.size(), 0.0);
  std::vector<std::vector<double>> offsets(schema.size());
  col = 1;
  for (std::size_t f = 0; f < schema.size(); ++f) {
    if (schema[f].kind == ColumnKind::kNumeric) {
      coefficients[f] = beta(col++);
    } else {
      offsets[f].assign(schema[f].levels.size(), 0.0);
      for (std::size_t l = 1; l < schema[f].levels.size(); ++l) {
        offsets[f][l] = beta(col++);
      }
    }
  }
  return LinearModel(std::move(schema), target, beta(0), std::move(coefficients),
                     std::move(offsets));
}

}  // namespace fme
