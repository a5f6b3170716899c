#include <gtest/gtest.h>

#include <filesystem>

#include "fme/analytic.h"
#include "fme/cart.h"
#include "fme/error.h"
#include "fme/forest.h"
#include "fme/linear_model.h"
#include "fme/model_io.h"
#include "test_util.h"

namespace fme {
namespace {

using testing_util::BikeData;

void ExpectRoundTrip(const Predictor& model, const Dataset& data) {
  const std::string text = SerializeModel(model);
  const auto back = DeserializeModel(text);
  EXPECT_EQ(back->kind(), model.kind());
  EXPECT_EQ(back->schema(), model.schema());
  EXPECT_EQ(back->target(), model.target());
  EXPECT_EQ(back->Predict(data), model.Predict(data));
  EXPECT_EQ(SerializeModel(*back), text);
  EXPECT_EQ(ModelId(*back), ModelId(model));
}

TEST(ModelIo, LinearRoundTrip) {
  const Dataset bikes = BikeData();
  ExpectRoundTrip(TrainLinear(bikes, "count"), bikes);
}

TEST(ModelIo, CartRoundTrip) {
  const Dataset bikes = BikeData();
  ExpectRoundTrip(TrainCart(bikes, "count", {.max_depth = 6, .min_node_size = 5}), bikes);
}

TEST(ModelIo, ForestRoundTrip) {
  const Dataset bikes = BikeData();
  ForestOptions options;
  options.n_trees = 5;
  ExpectRoundTrip(TrainForest(bikes, "count", options), bikes);
}

TEST(ModelIo, AnalyticRoundTrip) {
  const AnalyticPredictor m("temp^2 - 0.5*humidity", "count");
  ExpectRoundTrip(m, BikeData());
}

TEST(ModelIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "fme_model_io_test.json";
  const AnalyticPredictor m("2*x");
  SaveModel(m, path);
  EXPECT_EQ(LoadModel(path)->kind(), "analytic");
  std::filesystem::remove(path);
  EXPECT_THROW(LoadModel(path), IoError);
}

TEST(ModelIo, RejectsMalformedDocuments) {
  EXPECT_THROW(DeserializeModel("not json"), ValidationError);
  EXPECT_THROW(DeserializeModel(R"({"version": "other"})"), ValidationError);
  const std::string good = SerializeModel(AnalyticPredictor("x + 1"));
  auto doc = nlohmann::ordered_json::parse(good);
  doc["kind"] = "mystery";
  EXPECT_THROW(ModelFromJson(doc), ValidationError);
}

TEST(ModelIo, ModelIdDiffersBetweenModels) {
  EXPECT_NE(ModelId(AnalyticPredictor("x + 1")), ModelId(AnalyticPredictor("x + 2")));
  const std::string id = ModelId(AnalyticPredictor("x + 1"));
  EXPECT_EQ(id.rfind("analytic-", 0), 0u) << id;
}

}  // namespace
}  // namespace fme
