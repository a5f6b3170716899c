#include "fme/step.h"

#include <cmath>
#include <set>

#include "fme/error.h"
#include "fme/stats.h"
#include "json.hpp"

namespace fme {

StepSpec StepSpec::Numeric(std::vector<std::pair<std::string, double>> steps) {
  if (steps.empty()) throw ValidationError("numeric step needs at least one feature");
  std::set<std::string> seen;
  for (const auto& [name, h] : steps) {
    if (!seen.insert(name).second) {
      throw ValidationError("feature '" + name + "' appears twice in the step");
    }
    if (!std::isfinite(h) || h == 0.0) {
      throw ValidationError("step for feature '" + name + "' must be finite and nonzero");
    }
  }
  return StepSpec(NumericStep{std::move(steps)});
}

StepSpec StepSpec::Categorical(std::string feature, std::string reference) {
  if (feature.empty()) throw ValidationError("categorical step needs a feature");
  return StepSpec(CategoricalStep{std::move(feature), std::move(reference)});
}

StepSpec StepSpec::FromJson(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed step JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.empty()) {
    throw ValidationError("step must be a non-empty JSON object");
  }
  if (doc.contains("feature") && doc.contains("reference") && doc.size() == 2 &&
      doc["feature"].is_string() && doc["reference"].is_string()) {
    return Categorical(doc["feature"].get<std::string>(),
                       doc["reference"].get<std::string>());
  }
  const nlohmann::ordered_json& entries =
      doc.contains("steps") && doc.size() == 1 ? doc["steps"] : doc;
  if (!entries.is_object() || entries.empty()) {
    throw ValidationError("step must map features to step sizes");
  }
  std::vector<std::pair<std::string, double>> numeric;
  std::vector<std::pair<std::string, std::string>> categorical;
  for (const auto& [name, value] : entries.items()) {
    if (value.is_number()) {
      numeric.emplace_back(name, value.get<double>());
    } else if (value.is_string()) {
      categorical.emplace_back(name, value.get<std::string>());
    } else {
      throw ValidationError("step for '" + name + "' must be a number or a level");
    }
  }
  if (!numeric.empty() && !categorical.empty()) {
    throw ValidationError("a step cannot mix numeric and categorical features");
  }
  if (!categorical.empty()) {
    if (categorical.size() != 1) {
      throw ValidationError("a categorical step changes exactly one feature");
    }
    return Categorical(categorical[0].first, categorical[0].second);
  }
  return Numeric(std::move(numeric));
}

std::string StepSpec::ToJson() const {
  nlohmann::ordered_json doc;
  if (is_numeric()) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::object();
    for (const auto& [name, h] : numeric().steps) steps[name] = h;
    doc["steps"] = std::move(steps);
  } else {
    doc["feature"] = categorical().feature;
    doc["reference"] = categorical().reference;
  }
  return doc.dump();
}

std::vector<std::string> StepSpec::features() const {
  std::vector<std::string> out;
  if (is_numeric()) {
    for (const auto& [name, _] : numeric().steps) out.push_back(name);
  } else {
    out.push_back(categorical().feature);
  }
  return out;
}

void StepSpec::Validate(const Dataset& data) const {
  if (is_numeric()) {
    for (const auto& [name, _] : numeric().steps) {
      if (!data.HasColumn(name)) {
        throw ValidationError("unknown step feature '" + name + "'");
      }
      if (!data.column(name).is_numeric()) {
        throw ValidationError("step feature '" + name +
                              "' is categorical; give a reference level instead");
      }
    }
    return;
  }
  const auto& c = categorical();
  if (!data.HasColumn(c.feature)) {
    throw ValidationError("unknown step feature '" + c.feature + "'");
  }
  const Column& col = data.column(c.feature);
  if (col.is_numeric()) {
    throw ValidationError("step feature '" + c.feature +
                          "' is numeric; give a numeric step size instead");
  }
  const auto observed = col.ObservedLevels();
  if (std::find(observed.begin(), observed.end(), c.reference) == observed.end()) {
    throw ValidationError("reference level '" + c.reference +
                          "' is not observed in feature '" + c.feature + "'");
  }
}

double SuggestStep(const Dataset& data, std::string_view feature, const StepRule& rule) {
  const Column& col = data.column(feature);
  if (!col.is_numeric()) {
    throw ValidationError("step sizes can only be suggested for numeric features");
  }
  if (rule.kind == StepRule::Kind::kUnit) return 1.0;
  const ColumnStats stats = ComputeColumnStats(data, feature);
  double step = 0.0;
  switch (rule.kind) {
    case StepRule::Kind::kSd:
      step = stats.sd;
      break;
    case StepRule::Kind::kIqrFraction:
      if (!(rule.fraction > 0.0)) throw ValidationError("IQR fraction must be positive");
      step = rule.fraction * stats.iqr;
      break;
    case StepRule::Kind::kMad:
      step = stats.median_abs_dev;
      break;
    case StepRule::Kind::kUnit:
      break;
  }
  if (!(step > 0.0)) {
    throw ComputationError("feature '" + std::string(feature) +
                           "' has zero dispersion; choose a step size manually");
  }
  return step;
}

}  // namespace fme
