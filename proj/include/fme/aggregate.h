#ifndef FME_AGGREGATE_H_
#define FME_AGGREGATE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fme/dataset.h"
#include "fme/extrapolation.h"
#include "fme/fme.h"
#include "fme/predictor.h"
#include "json.hpp"

namespace fme {

// Mean of retained FMEs; throws ComputationError on an empty retained set.
double Ame(const FmeResultSet& results);
// Raw mean of the defined NLMs of retained rows; rows with an undefined NLM
// are skipped. Throws ComputationError when there are none.
double AverageNlm(const FmeResultSet& results);

// One summary row. `step` is the numeric step size or the reference level.
// Statistics are NaN when every row was excluded (n = 0).
struct AmeRow {
  std::string feature;
  std::variant<double, std::string> step;
  double ame = 0;
  double sd = 0;
  double q25 = 0;
  double q75 = 0;
  std::size_t n = 0;
};

struct AmeTable {
  std::vector<AmeRow> rows;
  FmeProvenance provenance;  // ep_method of the numeric rows
};

using StepOverride = std::variant<double, std::string>;

struct AmeTableOptions {
  // Subset of features; all non-target columns when unset.
  std::optional<std::vector<std::string>> features;
  // Numeric feature -> step size, or categorical feature -> single reference.
  std::map<std::string, StepOverride, std::less<>> overrides;
  ExtrapolationMethod ep = NoExtrapolationCheck{};
  int jobs = 1;
};

// 1, or 0.01 when the observed range of `feature` is at most 1.
double DefaultStepSize(const Dataset& data, std::string_view feature);

// One row per numeric feature and per observed level of each categorical
// feature, in column order then level order.
AmeTable ComputeAmeTable(const Predictor& model, const Dataset& data,
                         const AmeTableOptions& options = {});

AmeRow SummarizeAme(const FmeResultSet& results, std::string feature,
                    std::variant<double, std::string> step);

std::string AmeTableText(const AmeTable& table);
std::string AmeTableCsv(const AmeTable& table);
nlohmann::ordered_json AmeTableJson(const AmeTable& table);

}  // namespace fme

#endif  // FME_AGGREGATE_H_
