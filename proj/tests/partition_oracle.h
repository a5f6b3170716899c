#ifndef FME_TESTS_PARTITION_ORACLE_H_
#define FME_TESTS_PARTITION_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "fme/partition.h"
#include "fme/random.h"

namespace fme::testing_util {

// Random tree with `leaves` leaves over random FMEs, built by recursive
// splitting of member ranges.
inline PartitionTree RandomTree(Rng& rng, std::size_t leaves, std::size_t m) {
  std::vector<double> fmes(m);
  for (auto& f : fmes) f = rng.UniformUnit() * 10;
  std::vector<PartitionNode> nodes;
  std::function<std::size_t(std::size_t, std::size_t, std::size_t)> build =
      [&](std::size_t begin, std::size_t end, std::size_t n_leaves) {
        const std::size_t id = nodes.size();
        nodes.emplace_back();
        for (std::size_t i = begin; i < end; ++i) nodes[id].members.push_back(i);
        if (n_leaves == 1) return id;
        const std::size_t left_leaves = 1 + rng.UniformIndex(n_leaves - 1);
        const std::size_t cut = begin + left_leaves * 3 + rng.UniformIndex(3);
        PartitionSplit split{"x", ColumnKind::kNumeric, static_cast<double>(cut), {}};
        const std::size_t l = build(begin, cut, left_leaves);
        const std::size_t r = build(cut, end, n_leaves - left_leaves);
        nodes[id].split = split;
        nodes[id].left = static_cast<int>(l);
        nodes[id].right = static_cast<int>(r);
        return id;
      };
  build(0, m, leaves);
  std::vector<std::size_t> rows(m);
  for (std::size_t i = 0; i < m; ++i) rows[i] = i;
  return PartitionTree(std::move(nodes), rows, fmes, 0.0, "test");
}

// Two-pass sample SD, independent of the library.
inline double OracleSd(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Enumerates every collapse sequence down to k leaves and keeps those where
// each step collapses a parent of minimal pooled SD (lowest id on ties).
inline void EnumeratePolicySequences(const PartitionTree& tree, std::size_t k,
                              std::vector<std::set<std::size_t>>& finals, bool& all_seen) {
  const auto leaves = tree.Leaves();
  if (leaves.size() == k) {
    finals.emplace_back(leaves.begin(), leaves.end());
    return;
  }
  const auto parents = tree.PrunableParents();
  double min_sd = INFINITY;
  for (std::size_t p : parents) {
    std::vector<double> pooled;
    for (std::size_t m : tree.node(p).members) pooled.push_back(tree.fmes()[m]);
    min_sd = std::min(min_sd, OracleSd(pooled));
  }
  bool first_min = true;
  for (std::size_t p : parents) {
    std::vector<double> pooled;
    for (std::size_t m : tree.node(p).members) pooled.push_back(tree.fmes()[m]);
    // Every branch is explored; only policy-consistent ones reach `finals`.
    const bool policy = OracleSd(pooled) == min_sd && first_min;
    if (OracleSd(pooled) == min_sd) first_min = false;
    PartitionTree next = tree;
    next.Collapse(p);
    if (policy) {
      EnumeratePolicySequences(next, k, finals, all_seen);
    } else {
      std::vector<std::set<std::size_t>> discarded;
      EnumeratePolicySequences(next, k, discarded, all_seen);
      all_seen = all_seen && !discarded.empty();
    }
  }
}

}  // namespace fme::testing_util

#endif  // FME_TESTS_PARTITION_ORACLE_H_
