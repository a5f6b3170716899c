#ifndef FME_PARTITION_H_
#define FME_PARTITION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fme/dataset.h"
#include "fme/fme.h"
#include "json.hpp"

namespace fme {

// Grow a large tree, then prune it to exactly k leaves.
struct ExactGroups {
  std::size_t k = 2;
};

// Keep splitting nodes whose FME standard deviation exceeds `threshold`.
struct MaxSd {
  double threshold = 0;
};

struct PartitioningOptions {
  std::variant<ExactGroups, MaxSd> objective = ExactGroups{};
  int max_depth = 8;
  // Minimum rows per child; max(10, n / 50) when unset.
  std::optional<std::size_t> min_node_size;
  // Whether the stepped features are split candidates.
  bool include_stepped = true;
};

struct PartitionSplit {
  std::string feature;
  ColumnKind kind = ColumnKind::kNumeric;
  double threshold = 0;                  // numeric: left iff x <= threshold
  std::vector<std::string> left_levels;  // categorical
};

struct PartitionNode {
  std::optional<PartitionSplit> split;
  int left = -1;
  int right = -1;
  // Positions into the tree's retained observations.
  std::vector<std::size_t> members;
  double came = 0;
  double sd_fme = 0;
  std::optional<double> mean_nlm;

  bool is_leaf() const { return !split.has_value(); }
  std::size_t n() const { return members.size(); }
};

// Binary tree over the retained observations of an FmeResultSet. Node 0 is
// the root; nodes are stored in preorder of the grown tree. Collapsed
// subtrees stay in storage but are unreachable from the root.
class PartitionTree {
 public:
  PartitionTree(std::vector<PartitionNode> nodes, std::vector<std::size_t> data_rows,
                std::vector<double> fmes, double global_ame, std::string method);

  const std::vector<PartitionNode>& nodes() const { return nodes_; }
  const PartitionNode& node(std::size_t id) const { return nodes_[id]; }
  const PartitionNode& root() const { return nodes_[0]; }
  // Data row index of each retained observation.
  const std::vector<std::size_t>& data_rows() const { return data_rows_; }
  const std::vector<double>& fmes() const { return fmes_; }
  double global_ame() const { return global_ame_; }
  // "partitions = 2" or "max.sd = 400".
  const std::string& method() const { return method_; }
  void set_method(std::string method) { method_ = std::move(method); }

  // Reachable leaves, left to right.
  std::vector<std::size_t> Leaves() const;
  // Reachable internal nodes whose children are both leaves, ascending id.
  std::vector<std::size_t> PrunableParents() const;
  // Turns an internal node into a leaf.
  void Collapse(std::size_t id);

 private:
  std::vector<PartitionNode> nodes_;
  std::vector<std::size_t> data_rows_;
  std::vector<double> fmes_;
  double global_ame_;
  std::string method_;
};

// Recursive partitioning with FMEs as the target (greedy SSE splits), then
// the objective is enforced. Split candidates are all non-target columns of
// `data`, minus the stepped features unless include_stepped.
PartitionTree FitPartition(const FmeResultSet& results, const Dataset& data,
                           const PartitioningOptions& options = {});

// Repeatedly collapses the prunable parent with the lowest SD of its pooled
// FMEs (ties: lowest id) until exactly k leaves remain.
PartitionTree PruneToK(PartitionTree tree, std::size_t k);

// Summary block: root (starred) and leaf rows of n, cAME, SD(fME).
std::string CameSummary(const PartitionTree& tree);
nlohmann::ordered_json PartitionJson(const PartitionTree& tree);

}  // namespace fme

#endif  // FME_PARTITION_H_
