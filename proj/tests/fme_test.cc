#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fme/aggregate.h"
#include "fme/analytic.h"
#include "fme/cart.h"
#include "fme/error.h"
#include "fme/extrapolation.h"
#include "fme/fme.h"
#include "fme/linear_model.h"
#include "test_util.h"

namespace fme {
namespace {

using testing_util::BikeData;
using testing_util::NumericData;

FmeOptions WithEnvelope(const Dataset& data) {
  FmeOptions o;
  o.ep = EnvelopeOf(data);
  return o;
}

// EP count by direct scan: shifted value outside [min, max] of that feature.
std::size_t NaiveEpCount(const Dataset& data,
                         const std::vector<std::pair<std::string, double>>& step) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    bool outside = false;
    for (const auto& [name, h] : step) {
      const auto v = data.column(name).values();
      const double lo = *std::min_element(v.begin(), v.end());
      const double hi = *std::max_element(v.begin(), v.end());
      const double s = v[r] + h;
      outside = outside || s < lo || s > hi;
    }
    count += outside;
  }
  return count;
}

TEST(Fme, BikeEnvelopeCountsMatchNaiveScan) {
  const Dataset bikes = BikeData();
  const LinearModel model = TrainLinear(bikes, "count");
  const std::vector<std::vector<std::pair<std::string, double>>> steps = {
      {{"temp", 5}},
      {{"humidity", -0.1}},
      {{"temp", 5}, {"humidity", -0.1}},
      {{"temp", 5}, {"humidity", -0.1}, {"windspeed", -5}}};
  const std::size_t expected[] = {48, 1, 49, 117};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto res = ComputeFme(model, bikes, StepSpec::Numeric(steps[i]), WithEnvelope(bikes));
    EXPECT_EQ(res.n_extrapolation(), NaiveEpCount(bikes, steps[i]));
    EXPECT_EQ(res.n_extrapolation(), expected[i]);
    EXPECT_EQ(res.n_considered(), 731u);
    EXPECT_EQ(res.provenance().ep_method, "envelope");
  }
}

TEST(Fme, CategoricalExcludesRowsAtReference) {
  const Dataset bikes = BikeData();
  const LinearModel model = TrainLinear(bikes, "count");
  const auto res = ComputeFme(model, bikes, StepSpec::Categorical("weather", "rain"),
                              WithEnvelope(bikes));
  EXPECT_EQ(res.n_considered(), 710u);
  EXPECT_EQ(res.n_retained(), 710u);
  EXPECT_EQ(res.n_total(), 731u);
  EXPECT_EQ(res.provenance().ep_method, "none");
  const Column& w = bikes.column("weather");
  for (const auto& r : res.rows()) EXPECT_NE(w.label(r.row), "rain");
}

TEST(Fme, EqualsDifferenceOfPredictions) {
  const Dataset bikes = BikeData();
  const CartTree tree = TrainCart(bikes, "count", {.max_depth = 8, .min_node_size = 5});
  const StepSpec step = StepSpec::Numeric({{"temp", 2.5}, {"windspeed", -1}});
  const auto res = ComputeFme(tree, bikes, step);
  std::vector<std::size_t> all(bikes.n_rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto shifted = tree.Predict(ApplyStep(bikes, step, all));
  const auto base = tree.Predict(bikes);
  for (const auto& r : res.rows()) EXPECT_EQ(r.fme, shifted[r.row] - base[r.row]);
}

TEST(Fme, LinearModelGivesBetaTimesStep) {
  const std::vector<FeatureSpec> schema{{"a", ColumnKind::kNumeric, {}},
                                        {"b", ColumnKind::kNumeric, {}}};
  const LinearModel m(schema, "y", 0.7, {3.0, -2.0}, {{}, {}});
  Rng rng(2);
  const Dataset d = NumericData({{"a", testing_util::Uniform(rng, 100, -5, 5)},
                                 {"b", testing_util::Uniform(rng, 100, -5, 5)}});
  const auto res = ComputeFme(m, d, StepSpec::Numeric({{"a", 0.5}, {"b", 2}}));
  for (const auto& r : res.rows()) EXPECT_NEAR(r.fme, 3.0 * 0.5 - 2.0 * 2, 1e-12);
  EXPECT_NEAR(Ame(res), -2.5, 1e-12);
}

TEST(Fme, AdditiveModelDecomposes) {
  // f = a^2 + sin(b): the joint FME is the sum of the single-feature FMEs.
  const AnalyticPredictor m("a^2 + sin(b)");
  Rng rng(4);
  const Dataset d = NumericData({{"a", testing_util::Uniform(rng, 50, -2, 2)},
                                 {"b", testing_util::Uniform(rng, 50, -2, 2)}});
  const auto joint = ComputeFme(m, d, StepSpec::Numeric({{"a", 0.3}, {"b", -0.7}}));
  const auto fa = ComputeFme(m, d, StepSpec::Numeric({{"a", 0.3}}));
  const auto fb = ComputeFme(m, d, StepSpec::Numeric({{"b", -0.7}}));
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    EXPECT_NEAR(joint.rows()[i].fme, fa.rows()[i].fme + fb.rows()[i].fme, 1e-12);
  }
}

TEST(Fme, JobsDoNotChangeResults) {
  const Dataset bikes = BikeData();
  const CartTree tree = TrainCart(bikes, "count", {.max_depth = 10, .min_node_size = 3});
  FmeOptions one = WithEnvelope(bikes);
  one.with_nlm = true;
  FmeOptions many = one;
  many.jobs = 4;
  const StepSpec step = StepSpec::Numeric({{"temp", 5}});
  EXPECT_EQ(FmeCsv(ComputeFme(tree, bikes, step, one)),
            FmeCsv(ComputeFme(tree, bikes, step, many)));
}

TEST(Fme, ExtrapolationRowsKeptButNotRetained) {
  const Dataset d = NumericData({{"x", {0, 1, 2, 3}}});
  const AnalyticPredictor m("x");
  FmeOptions o = WithEnvelope(d);
  o.with_nlm = true;
  const auto res = ComputeFme(m, d, StepSpec::Numeric({{"x", 1.5}}), o);
  ASSERT_EQ(res.rows().size(), 4u);
  EXPECT_EQ(res.n_extrapolation(), 2u);
  EXPECT_EQ(res.retained_rows(), (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(res.rows()[3].nlm.has_value());
  EXPECT_EQ(FmeCsv(res),
            "row_index,fme,nlm,extrapolation\n"
            "0,1.5,1,false\n1,1.5,1,false\n2,1.5,,true\n3,1.5,,true\n");
}

TEST(Extrapolation, BoundaryIsInside) {
  const Dataset ref = NumericData({{"x", {0, 10}}, {"y", {0, 1}}});
  const auto env = std::get<EnvelopeCheck>(EnvelopeOf(ref)).envelope;
  const Dataset probe = NumericData({{"x", {10, 10.000001, -1e-9}}, {"y", {1, 0, 0}}});
  EXPECT_EQ(DetectExtrapolation(probe, env), (std::vector<bool>{false, true, true}));
}

TEST(Extrapolation, SeparateReferenceData) {
  const Dataset bikes = BikeData();
  const LinearModel model = TrainLinear(bikes, "count");
  // A reference covering a wider temp range yields no EPs.
  Dataset wide = bikes;
  auto temps = std::vector<double>(bikes.column("temp").values().begin(),
                                   bikes.column("temp").values().end());
  temps[0] = 100;
  wide.SetNumeric("temp", temps);
  FmeOptions o;
  o.ep = EnvelopeOf(wide);
  EXPECT_EQ(ComputeFme(model, bikes, StepSpec::Numeric({{"temp", 5}}), o).n_extrapolation(),
            0u);
}

TEST(Fme, SummaryLayout) {
  const Dataset bikes = BikeData();
  const LinearModel model = TrainLinear(bikes, "count");
  const auto res = ComputeFme(model, bikes, StepSpec::Numeric({{"temp", 5}}), WithEnvelope(bikes));
  const std::string s = FmeSummary(res);
  EXPECT_EQ(s.rfind("Forward Marginal Effects Object\n\nStep type:\n  numerical\n", 0), 0u);
  EXPECT_NE(s.find("Features & step lengths:\n  temp, 5\n"), std::string::npos);
  EXPECT_NE(s.find("  envelope, EPs: 48 of 731 obs. (7 %)\n"), std::string::npos);
  EXPECT_NE(s.find("Average Marginal Effect (AME):\n"), std::string::npos);
  EXPECT_EQ(s.find("ANLM"), std::string::npos);

  const auto cat = ComputeFme(model, bikes, StepSpec::Categorical("weather", "rain"));
  const std::string c = FmeSummary(cat);
  EXPECT_NE(c.find("  categorical\n"), std::string::npos);
  EXPECT_NE(c.find("Feature & reference category:\n  weather, rain\n"), std::string::npos);
  EXPECT_NE(c.find("  none, EPs: 0 of 710 obs. (0 %)\n"), std::string::npos);
}

TEST(Fme, JsonCarriesProvenanceAndRows) {
  const Dataset bikes = BikeData();
  const LinearModel model = TrainLinear(bikes, "count");
  const auto res = ComputeFme(model, bikes, StepSpec::Numeric({{"temp", 5}}), WithEnvelope(bikes));
  const auto doc = FmeJson(res);
  EXPECT_EQ(doc["rows"].size(), 731u);
  EXPECT_EQ(doc["provenance"]["dataset_id"], DatasetId(bikes));
  EXPECT_EQ(doc["provenance"]["ep_method"], "envelope");
}

TEST(Ame, EmptyRetainedSetIsComputationError) {
  const Dataset d = NumericData({{"x", {0, 1}}});
  const AnalyticPredictor m("x");
  const auto res = ComputeFme(m, d, StepSpec::Numeric({{"x", 5}}), WithEnvelope(d));
  EXPECT_EQ(res.n_retained(), 0u);
  EXPECT_THROW(Ame(res), ComputationError);
}

}  // namespace
}  // namespace fme
