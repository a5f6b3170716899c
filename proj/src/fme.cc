#include "fme/fme.h"

#include <cmath>
#include <numeric>

#include "fme/aggregate.h"
#include "fme/error.h"
#include "fme/model_io.h"
#include "fme/parallel.h"
#include "fme/text_table.h"

namespace fme {
namespace {

// Predicts `data` in at most `jobs` row chunks. Every model predicts rows
// independently, so the result does not depend on the chunking.
std::vector<double> PredictChunked(const Predictor& model, const Dataset& data, int jobs) {
  if (jobs <= 1) return model.Predict(data);
  std::vector<double> out(data.n_rows());
  ParallelFor(data.n_rows(), jobs, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> rows(end - begin);
    std::iota(rows.begin(), rows.end(), begin);
    const auto part = model.Predict(data.Select(rows));
    std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
  });
  return out;
}

void ComputeNlms(const Predictor& model, const Dataset& data, const NumericStep& step,
                 const FmeOptions& options, std::vector<FmeRow>& rows) {
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].extrapolation) targets.push_back(i);
  }
  const auto t = NlmGrid(options.nlm);
  const std::size_t k = t.size();
  ParallelFor(targets.size(), options.jobs, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> data_rows;
    data_rows.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) data_rows.push_back(rows[targets[i]].row);
    Dataset path = data.Repeat(data_rows, k);
    for (const auto& [name, h] : step.steps) {
      const auto x = data.column(name).values();
      std::vector<double> values(data_rows.size() * k);
      for (std::size_t j = 0; j < data_rows.size(); ++j) {
        for (std::size_t s = 0; s < k; ++s) values[j * k + s] = x[data_rows[j]] + t[s] * h;
      }
      path.SetNumeric(name, std::move(values));
    }
    const auto f = model.Predict(path);
    for (std::size_t j = 0; j < data_rows.size(); ++j) {
      FmeRow& row = rows[targets[begin + j]];
      row.nlm = NlmFromPath(std::span<const double>(f).subspan(j * k, k));
      row.nlm_undefined = !row.nlm.has_value();
    }
  });
}

std::string Percent(std::size_t part, std::size_t whole) {
  if (whole == 0) return "0";
  return FormatFixed(100.0 * static_cast<double>(part) / static_cast<double>(whole), 0);
}

}  // namespace

FmeResultSet::FmeResultSet(StepSpec step, std::vector<FmeRow> rows, std::size_t n_total,
                           FmeProvenance provenance, bool with_nlm)
    : step_(std::move(step)),
      rows_(std::move(rows)),
      n_total_(n_total),
      provenance_(std::move(provenance)),
      with_nlm_(with_nlm) {
  for (const auto& r : rows_) n_extrapolation_ += r.extrapolation ? 1 : 0;
}

std::vector<FmeRow> FmeResultSet::retained() const {
  std::vector<FmeRow> out;
  out.reserve(n_retained());
  for (const auto& r : rows_) {
    if (!r.extrapolation) out.push_back(r);
  }
  return out;
}

std::vector<double> FmeResultSet::retained_fmes() const {
  std::vector<double> out;
  out.reserve(n_retained());
  for (const auto& r : rows_) {
    if (!r.extrapolation) out.push_back(r.fme);
  }
  return out;
}

std::vector<std::size_t> FmeResultSet::retained_rows() const {
  std::vector<std::size_t> out;
  out.reserve(n_retained());
  for (const auto& r : rows_) {
    if (!r.extrapolation) out.push_back(r.row);
  }
  return out;
}

std::vector<double> FmeResultSet::retained_nlms() const {
  std::vector<double> out;
  for (const auto& r : rows_) {
    if (!r.extrapolation && r.nlm) out.push_back(*r.nlm);
  }
  return out;
}

Dataset ApplyStep(const Dataset& data, const StepSpec& step,
                  const std::vector<std::size_t>& rows) {
  Dataset shifted = data.Select(rows);
  if (step.is_numeric()) {
    for (const auto& [name, h] : step.numeric().steps) {
      std::vector<double> values(shifted.column(name).values().begin(),
                                 shifted.column(name).values().end());
      for (double& v : values) v += h;
      shifted.SetNumeric(name, std::move(values));
    }
  } else {
    const auto& c = step.categorical();
    const int32_t code = shifted.column(c.feature).LevelCode(c.reference);
    if (code < 0) throw ValidationError("unknown reference level '" + c.reference + "'");
    shifted.SetCodes(c.feature, std::vector<int32_t>(shifted.n_rows(), code));
  }
  return shifted;
}

FmeResultSet ComputeFme(const Predictor& model, const Dataset& data,
                        const StepSpec& step, const FmeOptions& options) {
  step.Validate(data);
  if (options.with_nlm && !step.is_numeric()) {
    throw ValidationError("NLM is only defined for numeric steps");
  }
  model.CheckSchema(data);

  std::vector<std::size_t> considered;
  if (step.is_numeric()) {
    considered.resize(data.n_rows());
    std::iota(considered.begin(), considered.end(), 0);
  } else {
    const Column& col = data.column(step.categorical().feature);
    const int32_t ref = col.LevelCode(step.categorical().reference);
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
      if (col.codes()[r] != ref) considered.push_back(r);
    }
  }

  FmeProvenance provenance{ModelId(model), DatasetId(data), "none"};
  std::vector<FmeRow> rows(considered.size());
  if (!considered.empty()) {
    const Dataset original = data.Select(considered);
    const Dataset shifted = ApplyStep(data, step, considered);
    const auto before = PredictChunked(model, original, options.jobs);
    const auto after = PredictChunked(model, shifted, options.jobs);
    std::vector<bool> flags(considered.size(), false);
    if (step.is_numeric()) {
      if (const auto* env = std::get_if<EnvelopeCheck>(&options.ep)) {
        flags = DetectExtrapolation(shifted, env->envelope);
        provenance.ep_method = "envelope";
      }
    }
    for (std::size_t i = 0; i < considered.size(); ++i) {
      rows[i].row = considered[i];
      rows[i].fme = after[i] - before[i];
      rows[i].extrapolation = flags[i];
    }
    if (options.with_nlm) ComputeNlms(model, data, step.numeric(), options, rows);
  }
  return FmeResultSet(step, std::move(rows), data.n_rows(), std::move(provenance),
                      options.with_nlm);
}

std::string FmeSummary(const FmeResultSet& results) {
  const StepSpec& step = results.step();
  std::string out = "Forward Marginal Effects Object\n\nStep type:\n";
  if (step.is_numeric()) {
    out += "  numerical\n\nFeatures & step lengths:\n";
    for (const auto& [name, h] : step.numeric().steps) {
      out += "  " + name + ", " + FormatShort(h) + "\n";
    }
  } else {
    out += "  categorical\n\nFeature & reference category:\n";
    out += "  " + step.categorical().feature + ", " + step.categorical().reference + "\n";
  }
  out += "\nExtrapolation point detection:\n";
  out += "  " + results.provenance().ep_method + ", EPs: " +
         std::to_string(results.n_extrapolation()) + " of " +
         std::to_string(results.n_considered()) + " obs. (" +
         Percent(results.n_extrapolation(), results.n_considered()) + " %)\n";
  out += "\nAverage Marginal Effect (AME):\n  ";
  out += results.n_retained() > 0 ? FormatRounded(Ame(results), 4) : "NA";
  out += "\n";
  if (results.has_nlm()) {
    out += "\nAverage Non-Linearity Measure (ANLM):\n  ";
    out += results.retained_nlms().empty() ? "NA"
                                           : FormatRounded(AverageNlm(results), 2);
    out += "\n";
  }
  return out;
}

std::string FmeCsv(const FmeResultSet& results) {
  std::string out = "row_index,fme,nlm,extrapolation\n";
  for (const auto& r : results.rows()) {
    out += std::to_string(r.row) + "," + FormatDouble17(r.fme) + ",";
    if (r.nlm) {
      out += FormatDouble17(*r.nlm);
    } else if (r.nlm_undefined) {
      out += "NA";
    }
    out += r.extrapolation ? ",true\n" : ",false\n";
  }
  return out;
}

nlohmann::ordered_json FmeJson(const FmeResultSet& results) {
  using Json = nlohmann::ordered_json;
  Json doc;
  Json prov;
  prov["model_id"] = results.provenance().model_id;
  prov["dataset_id"] = results.provenance().dataset_id;
  prov["ep_method"] = results.provenance().ep_method;
  prov["step"] = Json::parse(results.step().ToJson());
  doc["provenance"] = std::move(prov);
  Json summary;
  summary["n_total"] = results.n_total();
  summary["n_considered"] = results.n_considered();
  summary["n_extrapolation"] = results.n_extrapolation();
  summary["n_retained"] = results.n_retained();
  summary["ame"] = results.n_retained() > 0 ? Json(Ame(results)) : Json(nullptr);
  if (results.has_nlm()) {
    summary["anlm"] =
        results.retained_nlms().empty() ? Json(nullptr) : Json(AverageNlm(results));
  }
  doc["summary"] = std::move(summary);
  Json rows = Json::array();
  for (const auto& r : results.rows()) {
    Json row;
    row["row_index"] = r.row;
    row["fme"] = r.fme;
    row["nlm"] = r.nlm ? Json(*r.nlm) : Json(nullptr);
    row["extrapolation"] = r.extrapolation;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace fme
