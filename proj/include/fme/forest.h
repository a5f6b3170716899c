#ifndef FME_FOREST_H_
#define FME_FOREST_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fme/cart.h"
#include "fme/dataset.h"
#include "fme/predictor.h"

namespace fme {

struct ForestOptions {
  std::size_t n_trees = 100;
  // Features tried per split; 0 picks floor(sqrt(p)), at least 1.
  std::size_t mtry = 0;
  uint64_t seed = 1;
  // When false every tree sees the training rows once, in order.
  bool bootstrap = true;
  CartOptions tree{.max_depth = 30, .min_node_size = 5};
};

// Bagged regression trees; prediction is the mean over trees.
class RandomForest : public Predictor {
 public:
  RandomForest(std::vector<FeatureSpec> schema, std::string target,
               std::vector<CartTree> trees, uint64_t seed);

  std::string_view kind() const override { return "forest"; }
  const std::vector<CartTree>& trees() const { return trees_; }
  uint64_t seed() const { return seed_; }

 protected:
  void PredictBound(const BoundRows& rows, std::span<double> out) const override;
  bool handles_unseen_levels() const override { return true; }

 private:
  std::vector<CartTree> trees_;
  uint64_t seed_;
};

RandomForest TrainForest(const Dataset& data, const std::string& target,
                         const ForestOptions& options);

}  // namespace fme

#endif  // FME_FOREST_H_
