#include <algorithm>
#include <numeric>

#include "cart.hpp"
#include "pstat/errors.hpp"

namespace pstat::ml {

namespace detail {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  std::size_t left_count = 0;
  // Sum over children of (pos^2 + neg^2) / size. Larger is purer; it is a
  // monotone transform of the weighted Gini impurity.
  double purity = -1.0;
};

class CartBuilder {
 public:
  CartBuilder(const std::vector<ScoreVector>& x, const std::vector<int>& y,
              const TreeParams& params, std::size_t max_features, RandomSource* rng)
      : x_(x), y_(y), params_(params), max_features_(max_features), rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t n = rows.size();
    std::size_t pos = 0;
    for (auto r : rows) pos += static_cast<std::size_t>(y_[r]);

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].samples = n;
    nodes_[id].value = n ? static_cast<double>(pos) / static_cast<double>(n) : 0.0;

    if (pos == 0 || pos == n || depth >= params_.max_depth ||
        n < 2 * std::max<std::size_t>(params_.min_samples_leaf, 1)) {
      return id;
    }
    const Split best = find_split(rows, pos);
    if (best.feature < 0) return id;

    const auto f = static_cast<std::size_t>(best.feature);
    auto mid = std::stable_partition(rows.begin(), rows.end(), [&](std::size_t r) {
      return x_[r][f] <= best.threshold;
    });
    std::vector<std::size_t> left(rows.begin(), mid);
    std::vector<std::size_t> right(mid, rows.end());
    rows.clear();
    rows.shrink_to_fit();

    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    const int l = grow(left, depth + 1);
    nodes_[id].left = l;
    const int r = grow(right, depth + 1);
    nodes_[id].right = r;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> feats(kNumAttributes);
    std::iota(feats.begin(), feats.end(), std::size_t{0});
    if (max_features_ >= kNumAttributes || !rng_) return feats;
    // Partial Fisher-Yates: the first max_features slots form the subset.
    for (std::size_t i = 0; i < max_features_; ++i) {
      const std::size_t j = i + rng_->index(kNumAttributes - i);
      std::swap(feats[i], feats[j]);
    }
    feats.resize(std::max<std::size_t>(max_features_, 1));
    std::sort(feats.begin(), feats.end());
    return feats;
  }

  Split find_split(const std::vector<std::size_t>& rows, std::size_t pos_total) {
    const std::size_t n = rows.size();
    const std::size_t min_leaf = std::max<std::size_t>(params_.min_samples_leaf, 1);
    Split best;
    std::vector<std::pair<double, int>> column(n);
    for (std::size_t f : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i) column[i] = {x_[rows[i]][f], y_[rows[i]]};
      std::sort(column.begin(), column.end());
      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_pos += static_cast<std::size_t>(column[i].second);
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double lp = static_cast<double>(left_pos);
        const double ln = static_cast<double>(nl - left_pos);
        const double rp = static_cast<double>(pos_total - left_pos);
        const double rn = static_cast<double>(nr - (pos_total - left_pos));
        const double purity = (lp * lp + ln * ln) / static_cast<double>(nl) +
                              (rp * rp + rn * rn) / static_cast<double>(nr);
        if (purity > best.purity) {
          best.purity = purity;
          best.feature = static_cast<int>(f);
          best.threshold = split_point(column[i].first, column[i + 1].first);
          best.left_count = nl;
        }
      }
    }
    return best;
  }

  const std::vector<ScoreVector>& x_;
  const std::vector<int>& y_;
  TreeParams params_;
  std::size_t max_features_;
  RandomSource* rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::vector<TreeNode> build_cart(const std::vector<ScoreVector>& x, const std::vector<int>& y,
                                 std::vector<std::size_t> rows, const TreeParams& params,
                                 std::size_t max_features, RandomSource* rng) {
  return CartBuilder(x, y, params, max_features, rng).build(std::move(rows));
}

double tree_value(const std::vector<TreeNode>& nodes, const ScoreVector& x) {
  int i = 0;
  while (nodes[i].feature >= 0) {
    i = x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold ? nodes[i].left
                                                                             : nodes[i].right;
  }
  return nodes[i].value;
}

nlohmann::json tree_json(const std::vector<TreeNode>& nodes) {
  auto arr = nlohmann::json::array();
  for (const auto& n : nodes) {
    if (n.feature < 0) {
      arr.push_back({{"leaf", n.value}, {"samples", n.samples}});
    } else {
      arr.push_back({{"feature", kAttributeNames[static_cast<std::size_t>(n.feature)]},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"samples", n.samples}});
    }
  }
  return arr;
}

void split_dataset(const LabeledDataset& ds, std::vector<ScoreVector>& x, std::vector<int>& y) {
  x.clear();
  y.clear();
  x.reserve(ds.size());
  y.reserve(ds.size());
  for (const auto& r : ds.rows) {
    x.push_back(r.scores);
    y.push_back(r.label);
  }
}

}  // namespace detail

double DecisionTreeModel::predict_score(const ScoreVector& x) const {
  return detail::tree_value(nodes_, x);
}

nlohmann::json DecisionTreeModel::to_json() const {
  return {{"model", "dtree"}, {"nodes", detail::tree_json(nodes_)}};
}

std::size_t DecisionTreeModel::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (nodes_[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::unique_ptr<DecisionTreeModel> train_dtree(const LabeledDataset& dataset,
                                               const TreeParams& params) {
  require_trainable(dataset);
  if (params.max_depth < 1) throw ConfigError("max_depth must be >= 1");
  std::vector<ScoreVector> x;
  std::vector<int> y;
  detail::split_dataset(dataset, x, y);
  std::vector<std::size_t> rows(x.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return std::make_unique<DecisionTreeModel>(
      detail::build_cart(x, y, std::move(rows), params, kNumAttributes, nullptr));
}

}  // namespace pstat::ml
