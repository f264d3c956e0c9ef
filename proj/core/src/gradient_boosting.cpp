#include <algorithm>
#include <cmath>
#include <numeric>

#include "cart.hpp"
#include "pstat/errors.hpp"

namespace pstat::ml {

namespace {

double sigmoid(double m) {
  if (m >= 0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

double log_loss(const std::vector<int>& y, const std::vector<double>& margin) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    // log(1 + exp(-s m)) with s = +-1, evaluated without overflow.
    const double z = y[i] ? -margin[i] : margin[i];
    total += z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }
  return total / static_cast<double>(y.size());
}

// Regression tree on gradient statistics with second-order split gain.
class GradientTreeBuilder {
 public:
  GradientTreeBuilder(const std::vector<ScoreVector>& x, const std::vector<double>& g,
                      const std::vector<double>& h, const GbtParams& params)
      : x_(x), g_(g), h_(h), params_(params) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> rows(x_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  double score(double g, double h) const { return g * g / (h + params_.l2); }

  int grow(std::vector<std::size_t>& rows, std::size_t depth) {
    double gs = 0.0;
    double hs = 0.0;
    for (auto r : rows) {
      gs += g_[r];
      hs += h_[r];
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_[id].samples = rows.size();
    nodes_[id].value = -gs / (hs + params_.l2);
    if (depth >= params_.max_depth) return id;

    const std::size_t min_leaf = std::max<std::size_t>(params_.min_samples_leaf, 1);
    const std::size_t n = rows.size();
    if (n < 2 * min_leaf) return id;

    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    const double parent = score(gs, hs);
    std::vector<std::size_t> sorted(rows);
    for (std::size_t f = 0; f < kNumAttributes; ++f) {
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return x_[a][f] < x_[b][f] || (x_[a][f] == x_[b][f] && a < b);
      });
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        gl += g_[sorted[i]];
        hl += h_[sorted[i]];
        const double v = x_[sorted[i]][f];
        const double next = x_[sorted[i + 1]][f];
        if (v == next) continue;
        if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
        const double gain = 0.5 * (score(gl, hl) + score(gs - gl, hs - hl) - parent);
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = detail::split_point(v, next);
        }
      }
    }
    if (best_feature < 0) return id;

    const auto f = static_cast<std::size_t>(best_feature);
    auto mid = std::stable_partition(rows.begin(), rows.end(), [&](std::size_t r) {
      return x_[r][f] <= best_threshold;
    });
    std::vector<std::size_t> left(rows.begin(), mid);
    std::vector<std::size_t> right(mid, rows.end());
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const int l = grow(left, depth + 1);
    nodes_[id].left = l;
    const int r = grow(right, depth + 1);
    nodes_[id].right = r;
    return id;
  }

  const std::vector<ScoreVector>& x_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  GbtParams params_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

double GradientBoostingModel::margin(const ScoreVector& x) const {
  double m = base_margin_;
  for (const auto& tree : trees_) m += learning_rate_ * detail::tree_value(tree, x);
  return m;
}

double GradientBoostingModel::predict_score(const ScoreVector& x) const {
  return sigmoid(margin(x));
}

nlohmann::json GradientBoostingModel::to_json() const {
  auto trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(detail::tree_json(t));
  return {{"model", "gbt"},
          {"base_margin", base_margin_},
          {"learning_rate", learning_rate_},
          {"trees", std::move(trees)},
          {"loss", loss_}};
}

std::unique_ptr<GradientBoostingModel> train_gbt(const LabeledDataset& dataset,
                                                 const GbtParams& params) {
  require_trainable(dataset);
  if (params.max_depth < 1) throw ConfigError("gbt max_depth must be >= 1");
  if (!(params.learning_rate > 0.0)) throw ConfigError("gbt learning rate must be positive");
  if (params.l2 < 0.0) throw ConfigError("gbt l2 must be >= 0");

  std::vector<ScoreVector> x;
  std::vector<int> y;
  detail::split_dataset(dataset, x, y);
  const std::size_t n = x.size();

  const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const double base = std::log(pos / (static_cast<double>(n) - pos));
  std::vector<double> margin(n, base);
  std::vector<double> g(n);
  std::vector<double> h(n);
  std::vector<std::vector<TreeNode>> trees;
  std::vector<double> loss{log_loss(y, margin)};

  for (std::size_t round = 0; round < params.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      g[i] = p - y[i];
      h[i] = std::max(p * (1.0 - p), 1e-16);
    }
    auto tree = GradientTreeBuilder(x, g, h, params).build();
    for (std::size_t i = 0; i < n; ++i) {
      margin[i] += params.learning_rate * detail::tree_value(tree, x[i]);
    }
    trees.push_back(std::move(tree));
    loss.push_back(log_loss(y, margin));
  }
  return std::make_unique<GradientBoostingModel>(base, params.learning_rate, std::move(trees),
                                                 std::move(loss));
}

}  // namespace pstat::ml
