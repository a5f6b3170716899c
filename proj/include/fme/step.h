#ifndef FME_STEP_H_
#define FME_STEP_H_

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fme/dataset.h"

namespace fme {

// Shift of one or more numeric features by nonzero amounts (feature units).
struct NumericStep {
  std::vector<std::pair<std::string, double>> steps;  // in user order
};

// Replacement of one categorical feature by a reference level.
struct CategoricalStep {
  std::string feature;
  std::string reference;
};

class StepSpec {
 public:
  // Throws ValidationError for empty steps, zero/non-finite h, duplicates.
  static StepSpec Numeric(std::vector<std::pair<std::string, double>> steps);
  static StepSpec Categorical(std::string feature, std::string reference);

  // {"steps": {"temp": 5, ...}}, {"feature": "weather", "reference": "rain"},
  // or the short forms {"temp": 5, "humidity": -0.1} / {"weather": "rain"}.
  // Numeric and categorical entries cannot be mixed.
  static StepSpec FromJson(std::string_view text);
  std::string ToJson() const;

  bool is_numeric() const { return std::holds_alternative<NumericStep>(spec_); }
  const NumericStep& numeric() const { return std::get<NumericStep>(spec_); }
  const CategoricalStep& categorical() const {
    return std::get<CategoricalStep>(spec_);
  }
  // Features touched by the step, in order.
  std::vector<std::string> features() const;

  // Checks features exist with the right kind and the reference level is
  // observed in `data`.
  void Validate(const Dataset& data) const;

 private:
  explicit StepSpec(std::variant<NumericStep, CategoricalStep> spec)
      : spec_(std::move(spec)) {}
  std::variant<NumericStep, CategoricalStep> spec_;
};

// Dispersion-based default step sizes.
struct StepRule {
  enum class Kind { kUnit, kSd, kIqrFraction, kMad };
  Kind kind = Kind::kUnit;
  double fraction = 1.0;  // for kIqrFraction
};

// Positive step size for `feature` under `rule`; throws ComputationError when
// the dispersion is zero.
double SuggestStep(const Dataset& data, std::string_view feature, const StepRule& rule);

}  // namespace fme

#endif  // FME_STEP_H_
