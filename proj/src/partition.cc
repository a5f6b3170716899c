#include "fme/partition.h"

#include <algorithm>
#include <numeric>

#include "fme/aggregate.h"
#include "fme/cart.h"
#include "fme/error.h"
#include "fme/stats.h"
#include "fme/text_table.h"

namespace fme {

PartitionTree::PartitionTree(std::vector<PartitionNode> nodes,
                             std::vector<std::size_t> data_rows, std::vector<double> fmes,
                             double global_ame, std::string method)
    : nodes_(std::move(nodes)),
      data_rows_(std::move(data_rows)),
      fmes_(std::move(fmes)),
      global_ame_(global_ame),
      method_(std::move(method)) {
  if (nodes_.empty()) throw ValidationError("partition tree has no nodes");
}

std::vector<std::size_t> PartitionTree::Leaves() const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const PartitionNode& n = nodes_[id];
    if (n.is_leaf()) {
      out.push_back(id);
    } else {
      stack.push_back(static_cast<std::size_t>(n.right));
      stack.push_back(static_cast<std::size_t>(n.left));
    }
  }
  return out;
}

std::vector<std::size_t> PartitionTree::PrunableParents() const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const PartitionNode& n = nodes_[id];
    if (n.is_leaf()) continue;
    if (nodes_[n.left].is_leaf() && nodes_[n.right].is_leaf()) out.push_back(id);
    stack.push_back(static_cast<std::size_t>(n.right));
    stack.push_back(static_cast<std::size_t>(n.left));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void PartitionTree::Collapse(std::size_t id) {
  PartitionNode& n = nodes_.at(id);
  if (n.is_leaf()) throw ValidationError("cannot collapse a leaf");
  n.split.reset();
  n.left = n.right = -1;
}

namespace {

void FillStats(PartitionNode& node, const std::vector<double>& fmes,
               const std::vector<std::optional<double>>& nlms, bool with_nlm) {
  std::vector<double> values;
  values.reserve(node.members.size());
  for (std::size_t m : node.members) values.push_back(fmes[m]);
  node.came = Mean(values);
  node.sd_fme = SampleSd(values);
  if (!with_nlm) return;
  std::vector<double> defined;
  for (std::size_t m : node.members) {
    if (nlms[m]) defined.push_back(*nlms[m]);
  }
  if (!defined.empty()) node.mean_nlm = Mean(defined);
}

std::string MethodLabel(const PartitioningOptions& options) {
  if (const auto* g = std::get_if<ExactGroups>(&options.objective)) {
    return "partitions = " + std::to_string(g->k);
  }
  return "max.sd = " + FormatShort(std::get<MaxSd>(options.objective).threshold);
}

}  // namespace

PartitionTree FitPartition(const FmeResultSet& results, const Dataset& data,
                           const PartitioningOptions& options) {
  if (const auto* g = std::get_if<ExactGroups>(&options.objective); g && g->k < 1) {
    throw ValidationError("number of partitions must be at least 1");
  }
  if (const auto* s = std::get_if<MaxSd>(&options.objective); s && !(s->threshold >= 0)) {
    throw ValidationError("maximum SD must be non-negative");
  }
  if (options.max_depth < 0) throw ValidationError("max_depth must be non-negative");
  const auto retained = results.retained();
  if (retained.empty()) {
    throw ComputationError("cannot partition an empty set of FMEs");
  }
  const std::size_t m = retained.size();
  std::vector<std::size_t> data_rows(m);
  std::vector<double> fmes(m);
  std::vector<std::optional<double>> nlms(m);
  for (std::size_t i = 0; i < m; ++i) {
    data_rows[i] = retained[i].row;
    if (data_rows[i] >= data.n_rows()) {
      throw ValidationError("FME results do not belong to this dataset");
    }
    fmes[i] = retained[i].fme;
    nlms[i] = retained[i].nlm;
  }

  const auto stepped = results.step().features();
  std::vector<std::string> features;
  for (const auto& f : data.FeatureNames()) {
    const bool is_stepped = std::find(stepped.begin(), stepped.end(), f) != stepped.end();
    if (options.include_stepped || !is_stepped) features.push_back(f);
  }
  const Dataset subset = data.Select(data_rows);
  const auto schema = SchemaFromDataset(subset, features);
  const BoundRows x(schema, subset);
  std::vector<std::size_t> candidates(schema.size());
  std::iota(candidates.begin(), candidates.end(), 0);

  CartOptions cart;
  cart.max_depth = options.max_depth;
  cart.min_node_size = options.min_node_size.value_or(std::max<std::size_t>(10, m / 50));
  if (cart.min_node_size < 1) throw ValidationError("min_node_size must be at least 1");
  cart.min_sse_improvement = 0.0;

  SplitGate gate;
  if (const auto* s = std::get_if<MaxSd>(&options.objective)) {
    const double threshold = s->threshold;
    gate = [&fmes, threshold](std::span<const std::size_t> rows) {
      std::vector<double> values;
      values.reserve(rows.size());
      for (std::size_t r : rows) values.push_back(fmes[r]);
      return SampleSd(values) > threshold;
    };
  }
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), 0);
  GrownTree grown = candidates.empty()
                        ? GrownTree{{CartNode{}}, {all}}
                        : GrowTree(schema, x, fmes, all, candidates, cart, nullptr, gate);

  std::vector<PartitionNode> nodes(grown.nodes.size());
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const CartNode& c = grown.nodes[id];
    PartitionNode& p = nodes[id];
    p.members = std::move(grown.node_rows[id]);
    FillStats(p, fmes, nlms, results.has_nlm());
    if (c.is_leaf()) continue;
    const FeatureSpec& spec = schema[c.feature];
    PartitionSplit split{spec.name, spec.kind, c.threshold, {}};
    if (spec.kind == ColumnKind::kCategorical) {
      for (std::size_t l = 0; l < spec.levels.size(); ++l) {
        if (c.left_levels[l]) split.left_levels.push_back(spec.levels[l]);
      }
      split.threshold = 0;
    }
    p.split = std::move(split);
    p.left = c.left;
    p.right = c.right;
  }
  PartitionTree tree(std::move(nodes), std::move(data_rows), std::move(fmes),
                     Ame(results), MethodLabel(options));
  if (const auto* g = std::get_if<ExactGroups>(&options.objective)) {
    if (tree.Leaves().size() < g->k) {
      throw ComputationError("cannot find " + std::to_string(g->k) +
                             " subgroups: the grown tree has only " +
                             std::to_string(tree.Leaves().size()) +
                             " leaves (min node size " +
                             std::to_string(cart.min_node_size) + ")");
    }
    tree = PruneToK(std::move(tree), g->k);
  }
  return tree;
}

PartitionTree PruneToK(PartitionTree tree, std::size_t k) {
  if (k < 1) throw ValidationError("number of partitions must be at least 1");
  std::size_t leaves = tree.Leaves().size();
  if (k > leaves) {
    throw ValidationError("cannot prune to " + std::to_string(k) + " leaves: tree has " +
                          std::to_string(leaves));
  }
  while (leaves > k) {
    std::size_t best = 0;
    double best_sd = 0;
    bool found = false;
    for (std::size_t id : tree.PrunableParents()) {
      std::vector<double> pooled;
      for (std::size_t m : tree.node(id).members) pooled.push_back(tree.fmes()[m]);
      const double sd = SampleSd(pooled);
      if (!found || sd < best_sd) {
        best = id;
        best_sd = sd;
        found = true;
      }
    }
    tree.Collapse(best);
    --leaves;
  }
  return tree;
}

std::string CameSummary(const PartitionTree& tree) {
  TextTable t;
  t.header = {"n", "cAME", "SD(fME)", ""};
  auto add = [&](const PartitionNode& n, bool root) {
    t.row_names.emplace_back();
    t.cells.push_back({std::to_string(n.n()), FormatFixed(n.came, 4),
                       FormatFixed(n.sd_fme, 4), root ? "*" : " "});
  };
  add(tree.root(), true);
  if (!tree.root().is_leaf()) {
    for (std::size_t id : tree.Leaves()) add(tree.node(id), false);
  }
  std::string out = "PartitioningRpart of an FME object\n\nMethod:  " + tree.method() +
                    "\n\n" + RenderTextTable(t);
  out += "---\n* root node (non-partitioned)\n\nAME (Global): " +
         FormatRounded(tree.global_ame(), 4) + "\n";
  return out;
}

namespace {

nlohmann::ordered_json NodeJson(const PartitionTree& tree, std::size_t id) {
  using Json = nlohmann::ordered_json;
  const PartitionNode& n = tree.node(id);
  Json j;
  j["id"] = id;
  j["n"] = n.n();
  j["came"] = n.came;
  j["sd_fme"] = n.sd_fme;
  if (n.mean_nlm) j["mean_nlm"] = *n.mean_nlm;
  if (n.is_leaf()) return j;
  const PartitionSplit& s = *n.split;
  Json split;
  split["feature"] = s.feature;
  split["kind"] = std::string(ColumnKindName(s.kind));
  if (s.kind == ColumnKind::kNumeric) {
    split["threshold"] = s.threshold;
    split["left"] = s.feature + " <= " + FormatShort(s.threshold);
    split["right"] = s.feature + " > " + FormatShort(s.threshold);
  } else {
    split["left_levels"] = s.left_levels;
    std::string set;
    for (const auto& l : s.left_levels) set += (set.empty() ? "" : ", ") + l;
    split["left"] = s.feature + " in {" + set + "}";
    split["right"] = s.feature + " not in {" + set + "}";
  }
  j["split"] = std::move(split);
  j["left"] = NodeJson(tree, static_cast<std::size_t>(n.left));
  j["right"] = NodeJson(tree, static_cast<std::size_t>(n.right));
  return j;
}

}  // namespace

nlohmann::ordered_json PartitionJson(const PartitionTree& tree) {
  nlohmann::ordered_json doc;
  doc["method"] = tree.method();
  doc["global_ame"] = tree.global_ame();
  doc["n_leaves"] = tree.Leaves().size();
  doc["tree"] = NodeJson(tree, 0);
  return doc;
}

}  // namespace fme
