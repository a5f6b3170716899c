#include "fme/cart.h"

#include <algorithm>
#include <numeric>

#include "fme/error.h"

namespace fme {
namespace {

// Reduction in SSE from splitting a node into (nl, sl) and (nr, sr), where
// s is the sum of targets: nl nr / n (mean_l - mean_r)^2.
double SseReduction(double nl, double sl, double nr, double sr) {
  const double diff = sl / nl - sr / nr;
  return nl * nr / (nl + nr) * diff * diff;
}

// Candidate (reduction, threshold) is better than the incumbent if strictly
// larger; ties keep the earlier candidate (lower feature, lower threshold).
bool Improves(const std::optional<SplitCandidate>& best, double reduction) {
  return !best || reduction > best->sse_reduction;
}

}  // namespace

void SplitFinder::ScanNumeric(std::span<const std::size_t> rows,
                              std::size_t feature, std::size_t min_node_size,
                              std::optional<SplitCandidate>& best) const {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(rows.size());
  for (std::size_t r : rows) xy.emplace_back(x_.numeric(feature, r), y_[r]);
  std::sort(xy.begin(), xy.end());
  const std::size_t n = xy.size();
  double total = 0;
  for (const auto& p : xy) total += p.second;
  double left_sum = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    left_sum += xy[i].second;
    const std::size_t nl = i + 1;
    if (xy[i].first == xy[i + 1].first) continue;
    if (nl < min_node_size || n - nl < min_node_size) continue;
    const double red = SseReduction(static_cast<double>(nl), left_sum,
                                    static_cast<double>(n - nl), total - left_sum);
    if (Improves(best, red)) {
      double threshold = 0.5 * (xy[i].first + xy[i + 1].first);
      if (!(threshold < xy[i + 1].first)) threshold = xy[i].first;
      best = SplitCandidate{feature, threshold, {}, red};
    }
  }
}

void SplitFinder::ScanCategorical(std::span<const std::size_t> rows,
                                  std::size_t feature, std::size_t min_node_size,
                                  std::optional<SplitCandidate>& best) const {
  const std::size_t n_levels = schema_[feature].levels.size();
  std::vector<double> sums(n_levels, 0.0);
  std::vector<std::size_t> counts(n_levels, 0);
  for (std::size_t r : rows) {
    const int32_t level = x_.level(feature, r);
    if (level < 0) {
      throw ValidationError("training data has a level outside the schema");
    }
    sums[level] += y_[r];
    ++counts[level];
  }
  std::vector<std::size_t> present;
  for (std::size_t l = 0; l < n_levels; ++l) {
    if (counts[l] > 0) present.push_back(l);
  }
  if (present.size() < 2) return;
  std::stable_sort(present.begin(), present.end(),
                   [&](std::size_t a, std::size_t b) {
                     return sums[a] / static_cast<double>(counts[a]) <
                            sums[b] / static_cast<double>(counts[b]);
                   });
  const std::size_t n = rows.size();
  double total = 0;
  for (std::size_t l : present) total += sums[l];
  double left_sum = 0;
  std::size_t nl = 0;
  for (std::size_t k = 0; k + 1 < present.size(); ++k) {
    left_sum += sums[present[k]];
    nl += counts[present[k]];
    if (nl < min_node_size || n - nl < min_node_size) continue;
    const double red = SseReduction(static_cast<double>(nl), left_sum,
                                    static_cast<double>(n - nl), total - left_sum);
    if (Improves(best, red)) {
      std::vector<bool> left(n_levels, false);
      for (std::size_t j = 0; j <= k; ++j) left[present[j]] = true;
      best = SplitCandidate{feature, static_cast<double>(k), std::move(left), red};
    }
  }
}

std::optional<SplitCandidate> SplitFinder::Best(
    std::span<const std::size_t> rows, std::span<const std::size_t> features,
    std::size_t min_node_size, double min_reduction) const {
  std::optional<SplitCandidate> best;
  for (std::size_t f : features) {
    std::optional<SplitCandidate> local;
    if (schema_[f].kind == ColumnKind::kNumeric) {
      ScanNumeric(rows, f, min_node_size, local);
    } else {
      ScanCategorical(rows, f, min_node_size, local);
    }
    if (local && Improves(best, local->sse_reduction)) best = std::move(local);
  }
  if (best && !(best->sse_reduction > min_reduction)) return std::nullopt;
  return best;
}

bool SplitFinder::GoesLeft(const SplitCandidate& split, std::size_t row) const {
  if (schema_[split.feature].kind == ColumnKind::kNumeric) {
    return x_.numeric(split.feature, row) <= split.threshold;
  }
  return split.left_levels[x_.level(split.feature, row)];
}

namespace {

struct Grower {
  const std::vector<FeatureSpec>& schema;
  const BoundRows& x;
  std::span<const double> y;
  std::span<const std::size_t> candidates;
  const CartOptions& options;
  Rng* rng;
  const SplitGate& gate;
  SplitFinder finder;
  GrownTree out;

  std::vector<std::size_t> DrawFeatures() {
    std::vector<std::size_t> pool(candidates.begin(), candidates.end());
    if (options.mtry == 0 || options.mtry >= pool.size() || rng == nullptr) {
      return pool;
    }
    for (std::size_t i = 0; i < options.mtry; ++i) {
      const std::size_t j = i + rng->UniformIndex(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(options.mtry);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  std::size_t Grow(std::vector<std::size_t> rows, int depth) {
    const std::size_t id = out.nodes.size();
    out.nodes.emplace_back();
    out.node_rows.emplace_back();

    double sum = 0, lo = y[rows.front()], hi = lo;
    for (std::size_t r : rows) {
      sum += y[r];
      lo = std::min(lo, y[r]);
      hi = std::max(hi, y[r]);
    }
    const double n = static_cast<double>(rows.size());
    const double mean = sum / n;
    out.nodes[id].value = mean;
    out.nodes[id].n = rows.size();

    std::optional<SplitCandidate> split;
    if (depth < options.max_depth && rows.size() >= 2 * options.min_node_size &&
        hi > lo && (!gate || gate(rows))) {
      double sse = 0;
      for (std::size_t r : rows) sse += (y[r] - mean) * (y[r] - mean);
      const double floor =
          std::max(options.min_sse_improvement, 1e-12 * sse);
      const auto features = DrawFeatures();
      split = finder.Best(rows, features, std::max<std::size_t>(1, options.min_node_size),
                          floor);
    }
    if (!split) {
      out.node_rows[id] = std::move(rows);
      return id;
    }
    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
      (finder.GoesLeft(*split, r) ? left_rows : right_rows).push_back(r);
    }
    out.node_rows[id] = std::move(rows);
    out.nodes[id].feature = static_cast<int32_t>(split->feature);
    out.nodes[id].threshold = split->threshold;
    out.nodes[id].left_levels = std::move(split->left_levels);
    const std::size_t left = Grow(std::move(left_rows), depth + 1);
    const std::size_t right = Grow(std::move(right_rows), depth + 1);
    out.nodes[id].left = static_cast<int32_t>(left);
    out.nodes[id].right = static_cast<int32_t>(right);
    return id;
  }
};

}  // namespace

GrownTree GrowTree(const std::vector<FeatureSpec>& schema, const BoundRows& x,
                   std::span<const double> y, std::vector<std::size_t> rows,
                   std::span<const std::size_t> candidate_features,
                   const CartOptions& options, Rng* rng, const SplitGate& gate) {
  if (rows.empty()) throw ComputationError("cannot grow a tree on zero rows");
  Grower g{schema, x, y, candidate_features, options, rng, gate,
           SplitFinder(schema, x, y), {}};
  g.Grow(std::move(rows), 0);
  return std::move(g.out);
}

CartTree::CartTree(std::vector<FeatureSpec> schema, std::string target,
                   std::vector<CartNode> nodes)
    : Predictor(std::move(schema), std::move(target)), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("tree has no nodes");
  const auto n_nodes = static_cast<int32_t>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    if (node.feature >= static_cast<int32_t>(this->schema().size()) ||
        node.left <= 0 || node.right <= 0 || node.left >= n_nodes ||
        node.right >= n_nodes) {
      throw ValidationError("tree node references are out of range");
    }
    const FeatureSpec& spec = this->schema()[node.feature];
    if (spec.kind == ColumnKind::kCategorical &&
        node.left_levels.size() != spec.levels.size()) {
      throw ValidationError("categorical split level set has the wrong size");
    }
  }
}

std::size_t CartTree::n_leaves() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const CartNode& n) { return n.is_leaf(); }));
}

std::size_t CartTree::LeafIndex(const BoundRows& rows, std::size_t row) const {
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const CartNode& node = nodes_[id];
    bool left;
    if (schema()[node.feature].kind == ColumnKind::kNumeric) {
      left = rows.numeric(node.feature, row) <= node.threshold;
    } else {
      const int32_t level = rows.level(node.feature, row);
      left = level >= 0 ? node.left_levels[level]
                        : nodes_[node.left].n >= nodes_[node.right].n;
    }
    id = static_cast<std::size_t>(left ? node.left : node.right);
  }
  return id;
}

void CartTree::PredictBound(const BoundRows& rows, std::span<double> out) const {
  for (std::size_t r = 0; r < rows.n_rows(); ++r) {
    out[r] = nodes_[LeafIndex(rows, r)].value;
  }
}

CartTree TrainCart(const Dataset& data, const std::string& target,
                   const CartOptions& options, uint64_t seed) {
  const Column& y_col = data.column(target);
  if (!y_col.is_numeric()) {
    throw ValidationError("target '" + target + "' must be numeric");
  }
  if (options.min_node_size == 0) {
    throw ValidationError("min_node_size must be at least 1");
  }
  if (data.n_rows() < 2 * options.min_node_size) {
    throw ValidationError("need at least 2 * min_node_size rows to train a tree");
  }
  std::vector<std::string> features;
  for (const auto& c : data.columns()) {
    if (c.name() != target) features.push_back(c.name());
  }
  auto schema = SchemaFromDataset(data, features);
  BoundRows x(schema, data);
  std::vector<std::size_t> rows(data.n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<std::size_t> candidates(schema.size());
  std::iota(candidates.begin(), candidates.end(), 0);
  Rng rng(seed);
  GrownTree grown = GrowTree(schema, x, y_col.values(), std::move(rows),
                             candidates, options, &rng);
  return CartTree(std::move(schema), target, std::move(grown.nodes));
}

}  // namespace fme
