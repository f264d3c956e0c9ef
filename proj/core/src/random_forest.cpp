#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "cart.hpp"
#include "pstat/errors.hpp"
#include "pstat/hashing.hpp"

namespace pstat::ml {

double RandomForestModel::predict_score(const ScoreVector& x) const {
  std::size_t votes = 0;
  for (const auto& tree : trees_) votes += static_cast<std::size_t>(tree.predict(x));
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

nlohmann::json RandomForestModel::to_json() const {
  auto trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(detail::tree_json(t.nodes()));
  return {{"model", "rforest"}, {"n_trees", trees_.size()}, {"trees", std::move(trees)}};
}

std::unique_ptr<RandomForestModel> train_rforest(const LabeledDataset& dataset,
                                                 const ForestParams& params) {
  require_trainable(dataset);
  if (params.n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (params.max_features < 1) throw ConfigError("max_features must be >= 1");
  if (params.tree.max_depth < 1) throw ConfigError("max_depth must be >= 1");

  std::vector<ScoreVector> x;
  std::vector<int> y;
  detail::split_dataset(dataset, x, y);
  const std::size_t n = x.size();

  // Each tree owns a seed derived from the master seed, so the forest is the
  // same whatever the thread count.
  std::vector<std::vector<TreeNode>> built(params.n_trees);
  auto build_one = [&](std::size_t t) {
    Mt64Source rng(derive_seed(params.seed, "rforest-tree-" + std::to_string(t)));
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = rng.index(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    built[t] = detail::build_cart(x, y, std::move(rows), params.tree, params.max_features, &rng);
  };

  std::size_t threads = params.threads ? params.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, params.n_trees);
  if (threads == 1) {
    for (std::size_t t = 0; t < params.n_trees; ++t) build_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < params.n_trees; t = next++) build_one(t);
      });
    }
  }

  std::vector<DecisionTreeModel> trees;
  trees.reserve(built.size());
  for (auto& nodes : built) trees.emplace_back(std::move(nodes));
  return std::make_unique<RandomForestModel>(std::move(trees));
}

}  // namespace pstat::ml
