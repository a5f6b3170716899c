#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fme_cli_test_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult Run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(FME_CLI) + " " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, Slurp(out), Slurp(err)};
  }

  static std::string Data() {
    return std::string("--data ") + FME_DATA_DIR + "/bikes.csv --schema " + FME_DATA_DIR +
           "/bikes.schema.json";
  }

  // Trains a model into the test directory and returns its path.
  std::string Train(const std::string& kind, const std::string& extra = "") const {
    const fs::path model_dir = dir_ / ("model_" + kind);
    const auto r = Run("train " + Data() + " --target count --model-kind " + kind + " " +
                       extra + " --out " + model_dir.string());
    EXPECT_EQ(r.code, 0) << r.err;
    return (model_dir / "model.json").string();
  }

  fs::path dir_;
};

TEST_F(CliTest, FmeSummaryHasEnvelopeCountsAndStepLine) {
  const std::string model = Train("linear");
  const auto r = Run("fme " + Data() + " --model " + model +
                     " --step '{\"temp\": 5}' --ep envelope");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("EPs: 48 of 731"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("  temp, 5\n"), std::string::npos);
}

TEST_F(CliTest, LinearModelAmeIsBetaTimesStep) {
  const std::string model = Train("linear");
  const auto doc = nlohmann::json::parse(Slurp(model));
  const auto r = Run("fme " + Data() + " --model " + model +
                     " --step '{\"humidity\": -0.1}' --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto out = nlohmann::json::parse(r.out);
  const double beta = doc["parameters"]["coefficients"]["humidity"].get<double>();
  EXPECT_NEAR(out["summary"]["ame"].get<double>(), -0.1 * beta, 1e-9 * std::fabs(beta));
}

TEST_F(CliTest, BadStepFeatureExitsWithTwo) {
  const std::string model = Train("linear");
  const auto r = Run("fme " + Data() + " --model " + model + " --step '{\"tmep\": 5}'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("tmep"), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageAndIoErrorsExitWithTwo) {
  EXPECT_EQ(Run("").code, 2);
  EXPECT_EQ(Run("fme --data x.csv").code, 2);
  EXPECT_EQ(Run("fme --data /nonexistent.csv --model /nonexistent.json --step '{\"a\": 1}'").code,
            2);
  EXPECT_EQ(Run("--help").code, 0);
}

TEST_F(CliTest, InfeasiblePartitionExitsWithThree) {
  const std::string model = Train("linear");
  const auto r = Run("came " + Data() + " --model " + model +
                     " --step '{\"temp\": 5}' --partitions 700");
  EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST_F(CliTest, EmptyRetainedSet) {
  const std::string model = Train("linear");
  const std::string args = "fme " + Data() + " --model " + model +
                           " --step '{\"temp\": 500}' --ep envelope";
  const auto text = Run(args);
  EXPECT_EQ(text.code, 0) << text.err;
  EXPECT_NE(text.out.find("EPs: 731 of 731 obs. (100 %)"), std::string::npos) << text.out;
  EXPECT_NE(text.out.find("(AME):\n  NA\n"), std::string::npos) << text.out;
  EXPECT_EQ(Run(args + " --format svg").code, 3);
}

TEST_F(CliTest, CameSummaryLayout) {
  const std::string model = Train("cart", "--max-depth 8");
  const auto r = Run("came " + Data() + " --model " + model + " --step '{\"temp\": 5}'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("PartitioningRpart of an FME object\n\nMethod:  partitions = 2\n", 0),
            0u);
  EXPECT_NE(r.out.find("* root node (non-partitioned)"), std::string::npos);
  EXPECT_NE(r.out.find("AME (Global):"), std::string::npos);
}

TEST_F(CliTest, AmeTextAndJsonAgree) {
  const std::string model = Train("linear");
  const auto text = Run("ame " + Data() + " --model " + model + " --features temp,weather");
  const auto json = Run("ame " + Data() + " --model " + model +
                        " --features temp,weather --format json");
  ASSERT_EQ(text.code, 0) << text.err;
  ASSERT_EQ(json.code, 0) << json.err;
  EXPECT_NE(text.out.find("Feature step.size"), std::string::npos);
  const auto doc = nlohmann::json::parse(json.out);
  ASSERT_EQ(doc["rows"].size(), 4u);
  std::istringstream lines(text.out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::getline(lines, line);  // header
  for (const auto& row : doc["rows"]) {
    std::getline(lines, line);
    std::istringstream cells(line);
    std::string index, feature, step;
    double ame = 0;
    cells >> index >> feature >> step >> ame;
    EXPECT_EQ(feature, row["Feature"].get<std::string>());
    EXPECT_NEAR(ame, row["AME"].get<double>(), 5e-5 + 1e-9 * std::fabs(ame));
  }
}

TEST_F(CliTest, RepeatedRunsGiveIdenticalJson) {
  const std::string model = Train("forest", "--n-trees 10 --seed 3");
  const std::string again = (dir_ / "again").string();
  ASSERT_EQ(Run("train " + Data() + " --target count --n-trees 10 --seed 3 --out " + again).code,
            0);
  EXPECT_EQ(Slurp(model), Slurp(again + "/model.json"));
  for (int i = 0; i < 2; ++i) {
    const std::string out = (dir_ / ("run" + std::to_string(i))).string();
    ASSERT_EQ(Run("fme " + Data() + " --model " + model +
                  " --step '{\"temp\": 5}' --ep envelope --nlm --jobs 3 --out " + out + "/fme")
                  .code,
              0);
    ASSERT_EQ(Run("ame " + Data() + " --model " + model + " --out " + out + "/ame").code, 0);
    ASSERT_EQ(Run("came " + Data() + " --model " + model +
                  " --step '{\"temp\": 5}' --out " + out + "/came")
                  .code,
              0);
  }
  for (const char* file : {"fme/fme.json", "fme/plot.json", "fme/plot.svg", "ame/ame.json",
                           "came/came.json", "came/came.svg"}) {
    const std::string a = Slurp(dir_ / "run0" / file), b = Slurp(dir_ / "run1" / file);
    EXPECT_FALSE(a.empty()) << file;
    EXPECT_EQ(a, b) << file;
  }
}

TEST_F(CliTest, FetchBikesReproducesShippedData) {
  // A two-row day-level file in the upstream column layout.
  const fs::path day = dir_ / "day.csv";
  std::ofstream(day) << "instant,dteday,season,yr,mnth,holiday,weekday,workingday,weathersit,"
                        "temp,atemp,hum,windspeed,casual,registered,cnt\n"
                        "1,2011-01-01,1,0,1,0,6,0,2,0.344167,0.363625,0.805833,0.160446,"
                        "331,654,985\n"
                        "2,2011-01-02,1,0,1,0,0,0,2,0.363478,0.353739,0.696087,0.248539,"
                        "131,670,801\n";
  const auto r = Run("fetch-bikes --input " + day.string() + " --out " + dir_.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = Slurp(dir_ / "bikes.csv");
  const std::string shipped = Slurp(fs::path(FME_DATA_DIR) / "bikes.csv");
  EXPECT_EQ(shipped.substr(0, csv.size()), csv);
  EXPECT_TRUE(fs::exists(dir_ / "bikes.schema.json"));
}

}  // namespace
