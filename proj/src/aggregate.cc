#include "fme/aggregate.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fme/error.h"
#include "fme/stats.h"
#include "fme/text_table.h"

namespace fme {

double Ame(const FmeResultSet& results) {
  const auto fmes = results.retained_fmes();
  if (fmes.empty()) {
    throw ComputationError("AME of an empty set: every row was excluded");
  }
  return Mean(fmes);
}

double AverageNlm(const FmeResultSet& results) {
  const auto nlms = results.retained_nlms();
  if (nlms.empty()) throw ComputationError("no NLM values to average");
  return Mean(nlms);
}

double DefaultStepSize(const Dataset& data, std::string_view feature) {
  const auto values = data.column(feature).values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo <= 1.0 ? 0.01 : 1.0;
}

AmeRow SummarizeAme(const FmeResultSet& results, std::string feature,
                    std::variant<double, std::string> step) {
  AmeRow row{std::move(feature), std::move(step), 0, 0, 0, 0, results.n_retained()};
  const auto fmes = results.retained_fmes();
  if (fmes.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.ame = row.sd = row.q25 = row.q75 = nan;
    return row;
  }
  row.ame = Ame(results);
  row.sd = SampleSd(fmes);
  row.q25 = Quantile(fmes, 0.25);
  row.q75 = Quantile(fmes, 0.75);
  return row;
}

namespace {

void AdoptIds(const FmeResultSet& results, FmeProvenance& provenance) {
  provenance.model_id = results.provenance().model_id;
  provenance.dataset_id = results.provenance().dataset_id;
}

}  // namespace

AmeTable ComputeAmeTable(const Predictor& model, const Dataset& data,
                         const AmeTableOptions& options) {
  std::vector<std::string> features = data.FeatureNames();
  if (options.features) {
    for (const auto& f : *options.features) {
      if (!data.HasColumn(f)) throw ValidationError("unknown feature '" + f + "'");
      if (data.target() && f == *data.target()) {
        throw ValidationError("feature '" + f + "' is the target");
      }
    }
    std::vector<std::string> kept;
    for (const auto& f : features) {
      if (std::find(options.features->begin(), options.features->end(), f) !=
          options.features->end()) {
        kept.push_back(f);
      }
    }
    features = std::move(kept);
  }
  if (features.empty()) throw ValidationError("no features to summarize");
  for (const auto& [name, value] : options.overrides) {
    if (std::find(features.begin(), features.end(), name) == features.end()) {
      throw ValidationError("step override for unknown or excluded feature '" + name + "'");
    }
    const bool numeric = data.column(name).is_numeric();
    if (numeric != std::holds_alternative<double>(value)) {
      throw ValidationError("step override for '" + name + "' has the wrong type");
    }
  }

  AmeTable table;
  table.provenance.ep_method = std::string(ExtrapolationMethodName(options.ep));
  FmeOptions fme_options;
  fme_options.ep = options.ep;
  fme_options.jobs = options.jobs;
  for (const auto& feature : features) {
    const Column& col = data.column(feature);
    const auto it = options.overrides.find(feature);
    if (col.is_numeric()) {
      const double h = it != options.overrides.end() ? std::get<double>(it->second)
                                                     : DefaultStepSize(data, feature);
      const auto results =
          ComputeFme(model, data, StepSpec::Numeric({{feature, h}}), fme_options);
      AdoptIds(results, table.provenance);
      table.rows.push_back(SummarizeAme(results, feature, h));
      continue;
    }
    std::vector<std::string> levels = col.ObservedLevels();
    if (it != options.overrides.end()) levels = {std::get<std::string>(it->second)};
    for (const auto& level : levels) {
      const auto results =
          ComputeFme(model, data, StepSpec::Categorical(feature, level), fme_options);
      AdoptIds(results, table.provenance);
      table.rows.push_back(SummarizeAme(results, feature, level));
    }
  }
  return table;
}

namespace {

std::string StepLabel(const std::variant<double, std::string>& step) {
  if (const auto* h = std::get_if<double>(&step)) return FormatShort(*h);
  return std::get<std::string>(step);
}

std::string Cell(double value) {
  return std::isnan(value) ? "NA" : FormatRounded(value, 4);
}

}  // namespace

std::string AmeTableText(const AmeTable& table) {
  TextTable t;
  t.header = {"Feature", "step.size", "AME", "SD", "0.25", "0.75", "n"};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const AmeRow& r = table.rows[i];
    t.row_names.push_back(std::to_string(i + 1));
    t.cells.push_back({r.feature, StepLabel(r.step), Cell(r.ame), Cell(r.sd),
                       Cell(r.q25), Cell(r.q75), std::to_string(r.n)});
  }
  return "Model Summary Using Average Marginal Effects:\n\n" + RenderTextTable(t);
}

std::string AmeTableCsv(const AmeTable& table) {
  std::string out = "Feature,step.size,AME,SD,0.25,0.75,n\n";
  auto num = [](double v) { return std::isnan(v) ? std::string("NA") : FormatDouble17(v); };
  for (const AmeRow& r : table.rows) {
    const std::string step = std::holds_alternative<double>(r.step)
                                 ? FormatDouble17(std::get<double>(r.step))
                                 : CsvEscape(std::get<std::string>(r.step));
    out += CsvEscape(r.feature) + "," + step + "," + num(r.ame) + "," + num(r.sd) +
           "," + num(r.q25) + "," + num(r.q75) + "," + std::to_string(r.n) + "\n";
  }
  return out;
}

nlohmann::ordered_json AmeTableJson(const AmeTable& table) {
  using Json = nlohmann::ordered_json;
  auto num = [](double v) { return std::isnan(v) ? Json(nullptr) : Json(v); };
  Json doc;
  doc["provenance"] = {{"model_id", table.provenance.model_id},
                       {"dataset_id", table.provenance.dataset_id},
                       {"ep_method", table.provenance.ep_method}};
  Json rows = Json::array();
  for (const AmeRow& r : table.rows) {
    Json row;
    row["Feature"] = r.feature;
    if (const auto* h = std::get_if<double>(&r.step)) {
      row["step.size"] = *h;
    } else {
      row["step.size"] = std::get<std::string>(r.step);
    }
    row["AME"] = num(r.ame);
    row["SD"] = num(r.sd);
    row["0.25"] = num(r.q25);
    row["0.75"] = num(r.q75);
    row["n"] = r.n;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace fme
