#include "fme/forest.h"

#include <cmath>
#include <numeric>

#include "fme/error.h"
#include "fme/random.h"

namespace fme {

RandomForest::RandomForest(std::vector<FeatureSpec> schema, std::string target,
                           std::vector<CartTree> trees, uint64_t seed)
    : Predictor(std::move(schema), std::move(target)),
      trees_(std::move(trees)),
      seed_(seed) {
  if (trees_.empty()) throw ValidationError("forest needs at least one tree");
  for (const auto& t : trees_) {
    if (t.schema() != this->schema()) {
      throw ValidationError("forest trees must share the forest schema");
    }
  }
}

void RandomForest::PredictBound(const BoundRows& rows, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& tree : trees_) {
    for (std::size_t r = 0; r < rows.n_rows(); ++r) {
      out[r] += tree.nodes()[tree.LeafIndex(rows, r)].value;
    }
  }
  const double n = static_cast<double>(trees_.size());
  for (double& v : out) v /= n;
}

RandomForest TrainForest(const Dataset& data, const std::string& target,
                         const ForestOptions& options) {
  if (options.n_trees < 1) throw ValidationError("n_trees must be at least 1");
  const Column& y_col = data.column(target);
  if (!y_col.is_numeric()) {
    throw ValidationError("target '" + target + "' must be numeric");
  }
  std::vector<std::string> features;
  for (const auto& c : data.columns()) {
    if (c.name() != target) features.push_back(c.name());
  }
  if (features.empty()) throw ValidationError("forest needs at least one feature");
  if (options.mtry > features.size()) {
    throw ValidationError("mtry exceeds the number of features");
  }
  if (options.tree.min_node_size == 0) {
    throw ValidationError("min_node_size must be at least 1");
  }
  auto schema = SchemaFromDataset(data, features);
  BoundRows x(schema, data);
  CartOptions tree_options = options.tree;
  tree_options.mtry = options.mtry != 0
                          ? options.mtry
                          : std::max<std::size_t>(
                                1, static_cast<std::size_t>(std::floor(
                                       std::sqrt(static_cast<double>(features.size())))));
  std::vector<std::size_t> candidates(schema.size());
  std::iota(candidates.begin(), candidates.end(), 0);

  const std::size_t n = data.n_rows();
  std::vector<CartTree> trees;
  trees.reserve(options.n_trees);
  for (std::size_t t = 0; t < options.n_trees; ++t) {
    Rng rng(MixSeed(options.seed, t));
    std::vector<std::size_t> rows(n);
    if (options.bootstrap) {
      for (auto& r : rows) r = rng.UniformIndex(n);
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    GrownTree grown = GrowTree(schema, x, y_col.values(), std::move(rows),
                               candidates, tree_options, &rng);
    trees.emplace_back(schema, target, std::move(grown.nodes));
  }
  return RandomForest(std::move(schema), target, std::move(trees), options.seed);
}

}  // namespace fme
