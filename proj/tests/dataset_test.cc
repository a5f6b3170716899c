#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fme/dataset.h"
#include "fme/error.h"
#include "fme/stats.h"
#include "test_util.h"

namespace fme {
namespace {

using testing_util::BikeData;
using testing_util::NumericData;

TEST(ReadCsv, InfersKindsAndKeepsFirstAppearanceLevels) {
  const Dataset d = ReadCsv("a,b,c\n1,x,2.5\n2,y,-1\n3,x,0\n", {});
  ASSERT_EQ(d.n_rows(), 3u);
  EXPECT_TRUE(d.column("a").is_numeric());
  EXPECT_FALSE(d.column("b").is_numeric());
  EXPECT_EQ(d.column("b").levels(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(d.column("c").values()[1], -1.0);
}

TEST(ReadCsv, QuotedFieldsWithCommasAndQuotes) {
  const Dataset d = ReadCsv("name,v\n\"a,b\",1\n\"say \"\"hi\"\"\",2\n", {});
  EXPECT_EQ(d.column("name").label(0), "a,b");
  EXPECT_EQ(d.column("name").label(1), "say \"hi\"");
}

TEST(ReadCsv, SchemaForcesCategoricalAndLevelOrder) {
  CsvOptions options;
  options.schema = ParseSchemaJson(R"({"g": {"kind": "categorical", "levels": ["z", "a"]}})");
  const Dataset d = ReadCsv("g,y\na,1\nz,2\n", options);
  EXPECT_EQ(d.column("g").levels(), (std::vector<std::string>{"z", "a"}));
  EXPECT_EQ(d.column("g").codes()[0], 1);
}

TEST(ReadCsv, NumericLookingCategorical) {
  CsvOptions options;
  options.schema = ParseSchemaJson(R"({"year": "categorical"})");
  const Dataset d = ReadCsv("year\n0\n1\n0\n", options);
  EXPECT_FALSE(d.column("year").is_numeric());
  EXPECT_EQ(d.column("year").ObservedLevels(), (std::vector<std::string>{"0", "1"}));
}

TEST(ReadCsv, MissingCellsRejectedOrDropped) {
  const std::string text = "a,b\n1,2\n,3\n4,NA\n5,6\n";
  EXPECT_THROW(ReadCsv(text, {}), ValidationError);
  CsvOptions options;
  options.drop_missing = true;
  const Dataset d = ReadCsv(text, options);
  EXPECT_EQ(d.n_rows(), 2u);
  EXPECT_EQ(d.column("a").values()[1], 5.0);
}

TEST(ReadCsv, Errors) {
  EXPECT_THROW(ReadCsv("", {}), ValidationError);
  EXPECT_THROW(ReadCsv("a,b\n1\n", {}), ValidationError);
  EXPECT_THROW(ReadCsv("a,a\n1,2\n", {}), ValidationError);
  CsvOptions bad_target;
  bad_target.target = "nope";
  EXPECT_THROW(ReadCsv("a\n1\n", bad_target), ValidationError);
  CsvOptions bad_level;
  bad_level.schema = ParseSchemaJson(R"({"g": {"kind": "categorical", "levels": ["a"]}})");
  EXPECT_THROW(ReadCsv("g\nb\n", bad_level), ValidationError);
  EXPECT_THROW(LoadCsv("/nonexistent/file.csv", {}), IoError);
}

TEST(WriteCsv, RoundTripIsBitExact) {
  Rng rng(7);
  auto values = testing_util::Uniform(rng, 50, -1e6, 1e6);
  values.push_back(0.1 + 0.2);
  values.push_back(-0.0);
  const Dataset d("rt", {Column::Numeric("x", values),
                         Column::Categorical("g", std::vector<std::string>(52, "a,\"b\""))});
  const Dataset back = ReadCsv(WriteCsv(d), {});
  for (std::size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(back.column("x").values()[i], values[i]);
  }
  EXPECT_EQ(back.column("g").label(3), "a,\"b\"");
  EXPECT_EQ(WriteCsv(back), WriteCsv(d));
}

TEST(Dataset, SelectRepeatAndEdits) {
  Dataset d = NumericData({{"x", {1, 2, 3}}, {"y", {4, 5, 6}}}, "y");
  EXPECT_EQ(d.FeatureNames(), (std::vector<std::string>{"x"}));
  const std::vector<std::size_t> rows{2, 0};
  const Dataset s = d.Select(rows);
  EXPECT_EQ(s.column("x").values()[0], 3.0);
  const Dataset r = d.Repeat(rows, 2);
  ASSERT_EQ(r.n_rows(), 4u);
  EXPECT_EQ(r.column("x").values()[1], 3.0);
  EXPECT_EQ(r.column("x").values()[2], 1.0);
  EXPECT_THROW(d.SetNumeric("x", {1, 2}), ValidationError);
  EXPECT_THROW(d.SetNumeric("x", {1, 2, NAN}), ValidationError);
  EXPECT_THROW(d.ColumnIndex("zzz"), ValidationError);
}

TEST(Dataset, RejectsNonFiniteAndMismatchedColumns) {
  EXPECT_THROW(NumericData({{"x", {1, INFINITY}}}), ValidationError);
  EXPECT_THROW(NumericData({{"x", {1, 2}}, {"y", {1}}}), ValidationError);
}

TEST(DatasetId, DependsOnContent) {
  const Dataset a = NumericData({{"x", {1, 2}}});
  const Dataset b = NumericData({{"x", {1, 3}}});
  EXPECT_EQ(DatasetId(a), DatasetId(NumericData({{"x", {1, 2}}})));
  EXPECT_NE(DatasetId(a), DatasetId(b));
}

// Type-7 quantile written out independently of the library.
double QuantileOracle(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - std::floor(h)) * (v[hi] - v[lo]);
}

TEST(Stats, QuantileMatchesOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = testing_util::Uniform(rng, 1 + rng.UniformIndex(40), -10, 10);
    for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
      EXPECT_DOUBLE_EQ(Quantile(v, p), QuantileOracle(v, p));
    }
  }
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(Quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(Median(v), 2.5);
}

TEST(Stats, MeanSdMad) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(Mean(v), 5.0);
  EXPECT_NEAR(SampleSd(v), std::sqrt(32.0 / 7.0), 1e-15);
  EXPECT_DOUBLE_EQ(MedianAbsDeviation(v), 0.5);
  EXPECT_EQ(SampleSd(std::vector<double>{3.0}), 0.0);
}

TEST(Stats, EnvelopeOfBikeData) {
  const Dataset bikes = BikeData();
  ASSERT_EQ(bikes.n_rows(), 731u);
  const FeatureEnvelope env = ComputeEnvelope(bikes);
  EXPECT_FALSE(env.numeric.contains("count"));
  const auto temp = bikes.column("temp").values();
  EXPECT_EQ(env.numeric.at("temp").min, *std::min_element(temp.begin(), temp.end()));
  EXPECT_EQ(env.numeric.at("temp").max, *std::max_element(temp.begin(), temp.end()));
  EXPECT_EQ(env.categorical.at("weather").size(), 3u);
}

TEST(Stats, ColumnStatsNeedsNumericAndTwoRows) {
  const Dataset bikes = BikeData();
  EXPECT_THROW(ComputeColumnStats(bikes, "weather"), ValidationError);
  EXPECT_THROW(ComputeColumnStats(NumericData({{"x", {1}}}), "x"), ValidationError);
  const ColumnStats s = ComputeColumnStats(bikes, "humidity");
  EXPECT_NEAR(s.iqr, s.q75 - s.q25, 1e-15);
}

}  // namespace
}  // namespace fme
