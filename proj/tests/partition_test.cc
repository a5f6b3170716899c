#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fme/aggregate.h"
#include "fme/cart.h"
#include "fme/error.h"
#include "fme/fme.h"
#include "fme/partition.h"
#include "partition_oracle.h"
#include "test_util.h"

namespace fme {
namespace {

using testing_util::BikeData;
using testing_util::EnumeratePolicySequences;
using testing_util::Groups;
using testing_util::NumericData;
using testing_util::SdLimit;
using testing_util::RandomTree;

FmeResultSet ResultsFrom(const std::vector<double>& fmes, const std::string& feature = "x") {
  std::vector<FmeRow> rows;
  for (std::size_t i = 0; i < fmes.size(); ++i) rows.push_back({i, fmes[i], std::nullopt, false, false});
  return FmeResultSet(StepSpec::Numeric({{feature, 1}}), rows, fmes.size(), {}, false);
}

TEST(Partition, RecoversPiecewiseConstantBoundary) {
  Rng rng(1);
  const auto x = testing_util::Uniform(rng, 200, -5, 5);
  const auto noise = testing_util::Uniform(rng, 200, 0, 1);
  std::vector<double> fmes(200);
  for (std::size_t i = 0; i < 200; ++i) fmes[i] = x[i] < -2 ? 2.0 : 0.0;
  const Dataset d = NumericData({{"x", x}, {"z", noise}});
  const PartitionTree tree = FitPartition(ResultsFrom(fmes), d, Groups(2));
  ASSERT_EQ(tree.Leaves().size(), 2u);
  ASSERT_TRUE(tree.root().split.has_value());
  EXPECT_EQ(tree.root().split->feature, "x");
  EXPECT_NEAR(tree.root().split->threshold, -2.0, 0.2);
  for (std::size_t id : tree.Leaves()) EXPECT_EQ(tree.node(id).sd_fme, 0.0);
}

TEST(Partition, MaxSdOnConstantFmesKeepsRoot) {
  const Dataset d = NumericData({{"x", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
                                        16, 17, 18, 19, 20, 21, 22}}});
  const PartitionTree tree =
      FitPartition(ResultsFrom(std::vector<double>(22, 3.5)), d, SdLimit(1e-9));
  EXPECT_TRUE(tree.root().is_leaf());
  EXPECT_EQ(tree.Leaves().size(), 1u);
  EXPECT_NE(CameSummary(tree).find("max.sd = 1e-09"), std::string::npos);
}

TEST(Partition, MaxSdLeavesAreBelowThresholdOrUnsplittable) {
  const Dataset bikes = BikeData();
  const CartTree model = TrainCart(bikes, "count", {.max_depth = 8, .min_node_size = 5});
  const auto res = ComputeFme(model, bikes, StepSpec::Numeric({{"temp", 5}}));
  PartitioningOptions options = SdLimit(300);
  const PartitionTree tree = FitPartition(res, bikes, options);
  EXPECT_GT(tree.Leaves().size(), 1u);
  for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
    // Only nodes whose SD exceeds the threshold may have been split.
    if (!tree.node(id).is_leaf()) {
      EXPECT_GT(tree.node(id).sd_fme, 300.0);
    }
  }
}

TEST(Partition, WeightedLeafMeansGiveRootCame) {
  const Dataset bikes = BikeData();
  const CartTree model = TrainCart(bikes, "count", {.max_depth = 8, .min_node_size = 5});
  const auto res = ComputeFme(model, bikes, StepSpec::Numeric({{"temp", 5}}));
  for (std::size_t k = 1; k <= 6; ++k) {
    const PartitionTree tree = FitPartition(res, bikes, Groups(k));
    EXPECT_EQ(tree.Leaves().size(), k);
    EXPECT_EQ(tree.root().came, Ame(res));
    EXPECT_EQ(tree.global_ame(), Ame(res));
    double weighted = 0;
    std::size_t total = 0;
    for (std::size_t id : tree.Leaves()) {
      weighted += tree.node(id).came * static_cast<double>(tree.node(id).n());
      total += tree.node(id).n();
    }
    EXPECT_EQ(total, res.n_retained());
    EXPECT_NEAR(weighted / static_cast<double>(total), tree.root().came, 1e-10);
  }
}

TEST(Partition, ExcludingSteppedFeature) {
  const Dataset bikes = BikeData();
  const CartTree model = TrainCart(bikes, "count", {.max_depth = 8, .min_node_size = 5});
  const auto res = ComputeFme(model, bikes, StepSpec::Numeric({{"temp", 5}}));
  PartitioningOptions options = Groups(4);
  options.include_stepped = false;
  const PartitionTree tree = FitPartition(res, bikes, options);
  for (const auto& n : tree.nodes()) {
    if (n.split) {
      EXPECT_NE(n.split->feature, "temp");
    }
  }
}

TEST(Partition, InfeasibleAndInvalidObjectives) {
  const Dataset d = NumericData({{"x", {1, 2, 3}}});
  const auto res = ResultsFrom({1, 2, 3});
  EXPECT_THROW(FitPartition(res, d, Groups(0)), ValidationError);
  EXPECT_THROW(FitPartition(res, d, Groups(2)), ComputationError);
  EXPECT_THROW(FitPartition(res, d, SdLimit(-1)), ValidationError);
}

TEST(PruneToK, MatchesBruteForceEnumeration) {
  Rng rng(200);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t leaves = 2 + rng.UniformIndex(5);
    const PartitionTree tree = RandomTree(rng, leaves, 200);
    ASSERT_EQ(tree.Leaves().size(), leaves);
    for (std::size_t k = 1; k <= leaves; ++k) {
      std::vector<std::set<std::size_t>> finals;
      bool all_seen = true;
      EnumeratePolicySequences(tree, k, finals, all_seen);
      EXPECT_TRUE(all_seen);
      ASSERT_EQ(finals.size(), 1u);
      const auto pruned = PruneToK(tree, k).Leaves();
      EXPECT_EQ(std::set<std::size_t>(pruned.begin(), pruned.end()), finals.front());
      EXPECT_EQ(pruned.size(), k);
    }
  }
}

TEST(PruneToK, ForcedChoiceAndIdentity) {
  // Root -> (A, B); A -> leaves with FMEs {0, 0.2}; B -> leaves {0, 10}.
  std::vector<PartitionNode> nodes(7);
  auto link = [&](int id, int l, int r) {
    nodes[id].split = PartitionSplit{"x", ColumnKind::kNumeric, 0, {}};
    nodes[id].left = l;
    nodes[id].right = r;
  };
  link(0, 1, 4);
  link(1, 2, 3);
  link(4, 5, 6);
  nodes[0].members = {0, 1, 2, 3, 4, 5, 6, 7};
  nodes[1].members = {0, 1, 2, 3};
  nodes[2].members = {0, 1};
  nodes[3].members = {2, 3};
  nodes[4].members = {4, 5, 6, 7};
  nodes[5].members = {4, 5};
  nodes[6].members = {6, 7};
  const std::vector<double> fmes{0, 0, 0.2, 0.2, 0, 0, 10, 10};
  const PartitionTree tree(nodes, {0, 1, 2, 3, 4, 5, 6, 7}, fmes, 0, "t");
  EXPECT_EQ(PruneToK(tree, 3).Leaves(), (std::vector<std::size_t>{1, 5, 6}));
  EXPECT_EQ(PruneToK(tree, 4).Leaves(), tree.Leaves());
  EXPECT_EQ(PruneToK(tree, 1).Leaves(), (std::vector<std::size_t>{0}));
  EXPECT_THROW(PruneToK(tree, 5), ValidationError);
  EXPECT_THROW(PruneToK(tree, 0), ValidationError);
}

TEST(CameSummary, Layout) {
  std::vector<PartitionNode> nodes(3);
  nodes[0].split = PartitionSplit{"temp", ColumnKind::kNumeric, 12.5, {}};
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[0].members = {0, 1, 2};
  nodes[0].came = 307.32751;
  nodes[0].sd_fme = 611.07781;
  nodes[1].members = {0, 1};
  nodes[1].came = 728.39421;
  nodes[1].sd_fme = 437.04631;
  nodes[2].members = {2};
  nodes[2].came = -196.32781;
  nodes[2].sd_fme = 354.509;
  const PartitionTree tree(nodes, {0, 1, 2}, {0, 0, 0}, 307.32751, "partitions = 2");
  EXPECT_EQ(CameSummary(tree),
            "PartitioningRpart of an FME object\n\n"
            "Method:  partitions = 2\n\n"
            " n      cAME  SD(fME)  \n"
            " 3  307.3275 611.0778 *\n"
            " 2  728.3942 437.0463  \n"
            " 1 -196.3278 354.5090  \n"
            "---\n* root node (non-partitioned)\n\n"
            "AME (Global): 307.3275\n");
  const auto doc = PartitionJson(tree);
  EXPECT_EQ(doc["tree"]["split"]["left"], "temp <= 12.5");
  EXPECT_EQ(doc["n_leaves"], 2);
}

}  // namespace
}  // namespace fme
