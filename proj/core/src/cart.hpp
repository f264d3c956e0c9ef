#ifndef PSTAT_SRC_CART_HPP_
#define PSTAT_SRC_CART_HPP_

#include <cstddef>
#include <vector>

#include "pstat/classifiers.hpp"
#include "pstat/random.hpp"

namespace pstat::ml::detail {

// Builds a Gini CART tree over rows (duplicates allowed, as in a bootstrap
// sample). When max_features < kNumAttributes, each split examines a random
// subset of that size drawn from rng; otherwise every feature is examined and
// rng is unused.
std::vector<TreeNode> build_cart(const std::vector<ScoreVector>& x, const std::vector<int>& y,
                                 std::vector<std::size_t> rows, const TreeParams& params,
                                 std::size_t max_features, RandomSource* rng);

double tree_value(const std::vector<TreeNode>& nodes, const ScoreVector& x);

nlohmann::json tree_json(const std::vector<TreeNode>& nodes);

// Midpoint of two adjacent distinct values that still separates them under
// the "x <= threshold goes left" rule.
inline double split_point(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

void split_dataset(const LabeledDataset& ds, std::vector<ScoreVector>& x, std::vector<int>& y);

}  // namespace pstat::ml::detail

#endif  // PSTAT_SRC_CART_HPP_
