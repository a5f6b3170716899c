#include "fme/predictor.h"

#include <cmath>

#include "fme/error.h"

namespace fme {

std::vector<FeatureSpec> SchemaFromDataset(
    const Dataset& data, const std::vector<std::string>& features) {
  std::vector<FeatureSpec> schema;
  schema.reserve(features.size());
  for (const auto& f : features) {
    const Column& col = data.column(f);
    FeatureSpec spec{f, col.kind(), {}};
    if (!col.is_numeric()) spec.levels = col.levels();
    schema.push_back(std::move(spec));
  }
  return schema;
}

BoundRows::BoundRows(const std::vector<FeatureSpec>& schema, const Dataset& rows)
    : n_rows_(rows.n_rows()),
      numeric_(schema.size()),
      codes_(schema.size()),
      level_map_(schema.size()) {
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const FeatureSpec& spec = schema[f];
    if (!rows.HasColumn(spec.name)) {
      throw ValidationError("schema mismatch: data has no feature '" +
                            spec.name + "'");
    }
    const Column& col = rows.column(spec.name);
    if (col.kind() != spec.kind) {
      throw ValidationError("schema mismatch: feature '" + spec.name +
                            "' is " + std::string(ColumnKindName(col.kind())) +
                            " in the data but " +
                            std::string(ColumnKindName(spec.kind)) +
                            " in the model");
    }
    if (col.is_numeric()) {
      numeric_[f] = col.values();
      continue;
    }
    codes_[f] = col.codes();
    auto& map = level_map_[f];
    map.assign(col.levels().size(), -1);
    for (std::size_t l = 0; l < col.levels().size(); ++l) {
      for (std::size_t m = 0; m < spec.levels.size(); ++m) {
        if (spec.levels[m] == col.levels()[l]) {
          map[l] = static_cast<int32_t>(m);
          break;
        }
      }
    }
    for (int32_t code : codes_[f]) {
      if (map[code] < 0) {
        has_unseen_ = true;
        break;
      }
    }
  }
}

void Predictor::CheckSchema(const Dataset& data) const {
  BoundRows bound(schema_, data);
  if (bound.has_unseen_levels() && !handles_unseen_levels()) {
    throw ValidationError("data contains categorical levels unseen by the model");
  }
}

std::vector<double> Predictor::Predict(const Dataset& rows) const {
  BoundRows bound(schema_, rows);
  if (bound.has_unseen_levels() && !handles_unseen_levels()) {
    throw ValidationError("data contains categorical levels unseen by the model");
  }
  std::vector<double> out(rows.n_rows());
  PredictBound(bound, out);
  for (double v : out) {
    if (!std::isfinite(v)) {
      throw ComputationError("model '" + std::string(kind()) +
                             "' produced a non-finite prediction");
    }
  }
  return out;
}

}  // namespace fme
