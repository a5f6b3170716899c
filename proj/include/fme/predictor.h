#ifndef FME_PREDICTOR_H_
#define FME_PREDICTOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fme/dataset.h"

namespace fme {

// One input feature a model expects. Categorical features carry the level
// table the model was trained with.
struct FeatureSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  std::vector<std::string> levels;

  bool operator==(const FeatureSpec&) const = default;
};

// Builds a model schema from dataset columns.
std::vector<FeatureSpec> SchemaFromDataset(const Dataset& data,
                                           const std::vector<std::string>& features);

// A dataset resolved against a model schema: per model feature, a view of the
// numeric values or a translation of dataset level codes to model level
// indices (-1 for a level the model has never seen).
class BoundRows {
 public:
  BoundRows(const std::vector<FeatureSpec>& schema, const Dataset& rows);

  std::size_t n_rows() const { return n_rows_; }
  double numeric(std::size_t feature, std::size_t row) const {
    return numeric_[feature][row];
  }
  int32_t level(std::size_t feature, std::size_t row) const {
    return level_map_[feature][codes_[feature][row]];
  }
  bool has_unseen_levels() const { return has_unseen_; }

 private:
  std::size_t n_rows_ = 0;
  std::vector<std::span<const double>> numeric_;
  std::vector<std::span<const int32_t>> codes_;
  std::vector<std::vector<int32_t>> level_map_;
  bool has_unseen_ = false;
};

// Opaque prediction function returning one score per row: a regression value
// or the score of one fixed class. Implementations must be deterministic and
// must not mutate state when predicting, so Predict can be called from many
// threads at once.
class Predictor {
 public:
  virtual ~Predictor() = default;

  const std::vector<FeatureSpec>& schema() const { return schema_; }
  // Name of the column the model was trained to predict; may be empty.
  const std::string& target() const { return target_; }
  virtual std::string_view kind() const = 0;

  // Validates `rows` against the schema and returns one finite value per row.
  std::vector<double> Predict(const Dataset& rows) const;

  // Throws ValidationError when `data` lacks a feature or has the wrong kind.
  void CheckSchema(const Dataset& data) const;

 protected:
  Predictor(std::vector<FeatureSpec> schema, std::string target)
      : schema_(std::move(schema)), target_(std::move(target)) {}

  virtual void PredictBound(const BoundRows& rows, std::span<double> out) const = 0;
  // Models returning false reject rows with categorical levels outside their
  // schema instead of applying a fallback.
  virtual bool handles_unseen_levels() const { return false; }

 private:
  std::vector<FeatureSpec> schema_;
  std::string target_;
};

}  // namespace fme

#endif  // FME_PREDICTOR_H_
