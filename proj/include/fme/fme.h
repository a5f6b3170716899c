#ifndef FME_FME_H_
#define FME_FME_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fme/dataset.h"
#include "fme/extrapolation.h"
#include "fme/nlm.h"
#include "fme/predictor.h"
#include "fme/step.h"
#include "json.hpp"

namespace fme {

struct FmeOptions {
  ExtrapolationMethod ep = NoExtrapolationCheck{};
  bool with_nlm = false;
  NlmSettings nlm;
  int jobs = 1;
};

// One considered observation. Rows flagged as extrapolation points keep their
// FME value but are not part of the retained set; NLM is only computed for
// retained rows.
struct FmeRow {
  std::size_t row = 0;
  double fme = 0.0;
  std::optional<double> nlm;
  bool nlm_undefined = false;
  bool extrapolation = false;
};

struct FmeProvenance {
  std::string model_id;
  std::string dataset_id;
  std::string ep_method;
};

class FmeResultSet {
 public:
  FmeResultSet(StepSpec step, std::vector<FmeRow> rows, std::size_t n_total,
               FmeProvenance provenance, bool with_nlm);

  const StepSpec& step() const { return step_; }
  // Considered rows in input order: every row for numeric steps, rows not
  // already at the reference level for categorical steps.
  const std::vector<FmeRow>& rows() const { return rows_; }
  // Rows of the evaluation data.
  std::size_t n_total() const { return n_total_; }
  std::size_t n_considered() const { return rows_.size(); }
  std::size_t n_extrapolation() const { return n_extrapolation_; }
  std::size_t n_retained() const { return rows_.size() - n_extrapolation_; }
  const FmeProvenance& provenance() const { return provenance_; }
  bool has_nlm() const { return with_nlm_; }

  std::vector<FmeRow> retained() const;
  std::vector<double> retained_fmes() const;
  // Data row indices of retained rows.
  std::vector<std::size_t> retained_rows() const;
  // Defined NLM values of retained rows.
  std::vector<double> retained_nlms() const;

 private:
  StepSpec step_;
  std::vector<FmeRow> rows_;
  std::size_t n_total_;
  std::size_t n_extrapolation_ = 0;
  FmeProvenance provenance_;
  bool with_nlm_;
};

// FME(x) = f(x_S + h_S, x_-S) - f(x) for numeric steps and f(x with x_j := c_j)
// - f(x) for categorical steps. Predictions are batched into at most
// options.jobs concurrent chunks; results are in row order.
FmeResultSet ComputeFme(const Predictor& model, const Dataset& data,
                        const StepSpec& step, const FmeOptions& options = {});

// Copy of `data` with the step applied to `rows` (only those rows kept).
Dataset ApplyStep(const Dataset& data, const StepSpec& step,
                  const std::vector<std::size_t>& rows);

// Plain-text summary in the layout of the reference package.
std::string FmeSummary(const FmeResultSet& results);
// row_index,fme,nlm,extrapolation for every considered row.
std::string FmeCsv(const FmeResultSet& results);
nlohmann::ordered_json FmeJson(const FmeResultSet& results);

}  // namespace fme

#endif  // FME_FME_H_
