#ifndef FME_CART_H_
#define FME_CART_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fme/dataset.h"
#include "fme/predictor.h"
#include "fme/random.h"

namespace fme {

struct CartOptions {
  int max_depth = 30;
  std::size_t min_node_size = 5;
  // A split is accepted only if its SSE reduction exceeds this value.
  double min_sse_improvement = 0.0;
  // Features drawn (without replacement) per split; 0 means all.
  std::size_t mtry = 0;
};

// Internal nodes route a row left iff x <= threshold (numeric) or its level
// is in `left_levels` (categorical, indexed by model level).
struct CartNode {
  int32_t feature = -1;
  double threshold = 0.0;
  std::vector<bool> left_levels;
  int32_t left = -1;
  int32_t right = -1;
  double value = 0.0;
  std::size_t n = 0;

  bool is_leaf() const { return feature < 0; }
};

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  std::vector<bool> left_levels;
  double sse_reduction = 0.0;
};

// Exhaustive greedy SSE split search over a set of rows.
//
// Numeric features: every midpoint between consecutive distinct values.
// Categorical features: levels present in the node are sorted by mean target
// and every prefix of that order is a candidate left set, which is optimal for
// SSE. Among equal reductions the lowest feature index wins, then the lowest
// threshold (or shortest prefix).
class SplitFinder {
 public:
  SplitFinder(const std::vector<FeatureSpec>& schema, const BoundRows& x,
              std::span<const double> y)
      : schema_(schema), x_(x), y_(y) {}

  // `features` must be ascending schema indices. Both children of a returned
  // split hold at least `min_node_size` rows.
  std::optional<SplitCandidate> Best(std::span<const std::size_t> rows,
                                     std::span<const std::size_t> features,
                                     std::size_t min_node_size,
                                     double min_reduction) const;

  bool GoesLeft(const SplitCandidate& split, std::size_t row) const;

 private:
  void ScanNumeric(std::span<const std::size_t> rows, std::size_t feature,
                   std::size_t min_node_size,
                   std::optional<SplitCandidate>& best) const;
  void ScanCategorical(std::span<const std::size_t> rows, std::size_t feature,
                       std::size_t min_node_size,
                       std::optional<SplitCandidate>& best) const;

  const std::vector<FeatureSpec>& schema_;
  const BoundRows& x_;
  std::span<const double> y_;
};

// Nodes in preorder (parent, left subtree, right subtree) with the training
// rows that reached each node.
struct GrownTree {
  std::vector<CartNode> nodes;
  std::vector<std::vector<std::size_t>> node_rows;
};

// Extra stopping rule: return false to keep a node as a leaf.
using SplitGate = std::function<bool(std::span<const std::size_t> node_rows)>;

GrownTree GrowTree(const std::vector<FeatureSpec>& schema, const BoundRows& x,
                   std::span<const double> y, std::vector<std::size_t> rows,
                   std::span<const std::size_t> candidate_features,
                   const CartOptions& options, Rng* rng,
                   const SplitGate& gate = {});

class CartTree : public Predictor {
 public:
  CartTree(std::vector<FeatureSpec> schema, std::string target,
           std::vector<CartNode> nodes);

  std::string_view kind() const override { return "cart"; }
  const std::vector<CartNode>& nodes() const { return nodes_; }
  std::size_t n_leaves() const;

  // Index of the leaf reached by `row`. Unseen categorical levels follow the
  // child that received more training rows.
  std::size_t LeafIndex(const BoundRows& rows, std::size_t row) const;

 protected:
  void PredictBound(const BoundRows& rows, std::span<double> out) const override;
  bool handles_unseen_levels() const override { return true; }

 private:
  std::vector<CartNode> nodes_;
};

// Greedy variance-reduction regression tree on every non-target column.
CartTree TrainCart(const Dataset& data, const std::string& target,
                   const CartOptions& options, uint64_t seed = 0);

}  // namespace fme

#endif  // FME_CART_H_
