#include <gtest/gtest.h>

#include <cmath>

#include "fme/error.h"
#include "fme/stats.h"
#include "fme/step.h"
#include "test_util.h"

namespace fme {
namespace {

using testing_util::BikeData;

TEST(StepSpec, FromJsonForms) {
  const StepSpec a = StepSpec::FromJson(R"({"steps": {"temp": 5, "humidity": -0.1}})");
  ASSERT_TRUE(a.is_numeric());
  EXPECT_EQ(a.features(), (std::vector<std::string>{"temp", "humidity"}));
  EXPECT_EQ(a.numeric().steps[1].second, -0.1);

  const StepSpec b = StepSpec::FromJson(R"({"temp": 5})");
  EXPECT_EQ(b.numeric().steps.size(), 1u);

  const StepSpec c = StepSpec::FromJson(R"({"feature": "weather", "reference": "rain"})");
  ASSERT_FALSE(c.is_numeric());
  EXPECT_EQ(c.categorical().reference, "rain");

  const StepSpec d = StepSpec::FromJson(R"({"weather": "rain"})");
  EXPECT_EQ(d.categorical().feature, "weather");
}

TEST(StepSpec, JsonRoundTrip) {
  for (const char* text : {R"({"temp": 5, "windspeed": -5})", R"({"weather": "misty"})"}) {
    const StepSpec s = StepSpec::FromJson(text);
    EXPECT_EQ(StepSpec::FromJson(s.ToJson()).ToJson(), s.ToJson());
  }
}

TEST(StepSpec, RejectsBadSteps) {
  EXPECT_THROW(StepSpec::FromJson("{}"), ValidationError);
  EXPECT_THROW(StepSpec::FromJson("[1]"), ValidationError);
  EXPECT_THROW(StepSpec::FromJson("{bad"), ValidationError);
  EXPECT_THROW(StepSpec::FromJson(R"({"temp": 0})"), ValidationError);
  EXPECT_THROW(StepSpec::FromJson(R"({"temp": 1, "weather": "rain"})"), ValidationError);
  EXPECT_THROW(StepSpec::FromJson(R"({"weather": "rain", "season": "fall"})"), ValidationError);
  EXPECT_THROW(StepSpec::Numeric({{"a", 1}, {"a", 2}}), ValidationError);
  EXPECT_THROW(StepSpec::Numeric({{"a", NAN}}), ValidationError);
}

TEST(StepSpec, ValidateAgainstData) {
  const Dataset bikes = BikeData();
  EXPECT_NO_THROW(StepSpec::Numeric({{"temp", 5}}).Validate(bikes));
  EXPECT_THROW(StepSpec::Numeric({{"tmp", 5}}).Validate(bikes), ValidationError);
  EXPECT_THROW(StepSpec::Numeric({{"weather", 1}}).Validate(bikes), ValidationError);
  EXPECT_THROW(StepSpec::Categorical("temp", "x").Validate(bikes), ValidationError);
  EXPECT_THROW(StepSpec::Categorical("weather", "snow").Validate(bikes), ValidationError);
  try {
    StepSpec::Numeric({{"tmp", 5}}).Validate(bikes);
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("tmp"), std::string::npos);
  }
}

TEST(SuggestStep, Rules) {
  const Dataset bikes = BikeData();
  const ColumnStats s = ComputeColumnStats(bikes, "temp");
  EXPECT_EQ(SuggestStep(bikes, "temp", {}), 1.0);
  EXPECT_DOUBLE_EQ(SuggestStep(bikes, "temp", {StepRule::Kind::kSd}), s.sd);
  EXPECT_DOUBLE_EQ(SuggestStep(bikes, "temp", {StepRule::Kind::kIqrFraction, 0.5}),
                   0.5 * s.iqr);
  EXPECT_DOUBLE_EQ(SuggestStep(bikes, "temp", {StepRule::Kind::kMad}), s.median_abs_dev);
  EXPECT_THROW(SuggestStep(bikes, "weather", {}), ValidationError);
  const Dataset flat = testing_util::NumericData({{"x", {2, 2, 2}}});
  EXPECT_THROW(SuggestStep(flat, "x", {StepRule::Kind::kSd}), ComputationError);
}

}  // namespace
}  // namespace fme
