#ifndef PSTAT_CLASSIFIERS_HPP_
#define PSTAT_CLASSIFIERS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pstat/corpus.hpp"

namespace pstat::ml {

// A fitted model. Immutable after training, so concurrent prediction is safe.
class TrainedModel {
 public:
  virtual ~TrainedModel() = default;

  // Higher means more likely positive.
  virtual double predict_score(const ScoreVector& x) const = 0;
  // 0.5 for probabilistic models, 0.0 for margin models.
  virtual double threshold() const { return 0.5; }
  int predict(const ScoreVector& x) const { return predict_score(x) >= threshold() ? 1 : 0; }

  // Diagnostic dump; the layout is not a stable format.
  virtual nlohmann::json to_json() const = 0;
  // Per-epoch or per-round training loss for iterative learners.
  virtual std::vector<double> loss_curve() const { return {}; }
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  // Throws InsufficientDataError on an empty or single-class dataset.
  virtual std::unique_ptr<TrainedModel> train(const LabeledDataset& dataset) const = 0;
};

// Checks the training preconditions shared by every learner.
void require_trainable(const LabeledDataset& dataset);

// ---------------------------------------------------------------------------
// k nearest neighbours

struct KnnParams {
  std::size_t k = 5;
};

// Majority vote of the k nearest training points (Euclidean, distance ties to
// the lower training index). The score is positives / (k + 1), which is at
// least 0.5 exactly when positives > k / 2, so an even split votes 0.
class KnnModel final : public TrainedModel {
 public:
  KnnModel(KnnParams params, std::vector<ScoreVector> points, std::vector<int> labels);
  double predict_score(const ScoreVector& x) const override;
  nlohmann::json to_json() const override;

 private:
  KnnParams params_;
  std::vector<ScoreVector> points_;
  std::vector<int> labels_;
};

std::unique_ptr<KnnModel> train_knn(const LabeledDataset& dataset, const KnnParams& params);

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

struct GnbParams {
  double variance_floor = 1e-9;
};

class GaussianNbModel final : public TrainedModel {
 public:
  struct ClassStats {
    double prior = 0.0;
    ScoreVector mean{};
    ScoreVector variance{};
  };

  explicit GaussianNbModel(std::array<ClassStats, 2> stats) : stats_(stats) {}

  // Posterior probabilities {P(0|x), P(1|x)}.
  std::array<double, 2> posterior(const ScoreVector& x) const;
  double predict_score(const ScoreVector& x) const override { return posterior(x)[1]; }
  nlohmann::json to_json() const override;
  const std::array<ClassStats, 2>& stats() const noexcept { return stats_; }

 private:
  std::array<ClassStats, 2> stats_;
};

std::unique_ptr<GaussianNbModel> train_gnb(const LabeledDataset& dataset,
                                           const GnbParams& params);

// ---------------------------------------------------------------------------
// CART decision tree

struct TreeParams {
  std::size_t max_depth = 10;
  std::size_t min_samples_leaf = 2;
};

// Flat binary tree. Internal nodes send x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf: fraction of positive training rows
  std::size_t samples = 0;
};

class DecisionTreeModel final : public TrainedModel {
 public:
  explicit DecisionTreeModel(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}
  double predict_score(const ScoreVector& x) const override;
  nlohmann::json to_json() const override;
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

// Gini impurity, exhaustive search over midpoints of adjacent distinct
// values. Equal impurity goes to the lower feature index, then the lower
// threshold.
std::unique_ptr<DecisionTreeModel> train_dtree(const LabeledDataset& dataset,
                                               const TreeParams& params);

// ---------------------------------------------------------------------------
// Random forest

struct ForestParams {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  std::size_t max_features = 3;  // features examined per split
  TreeParams tree{};
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
};

// Score is the fraction of trees voting positive.
class RandomForestModel final : public TrainedModel {
 public:
  explicit RandomForestModel(std::vector<DecisionTreeModel> trees) : trees_(std::move(trees)) {}
  double predict_score(const ScoreVector& x) const override;
  nlohmann::json to_json() const override;
  const std::vector<DecisionTreeModel>& trees() const noexcept { return trees_; }

 private:
  std::vector<DecisionTreeModel> trees_;
};

std::unique_ptr<RandomForestModel> train_rforest(const LabeledDataset& dataset,
                                                 const ForestParams& params);

// ---------------------------------------------------------------------------
// Linear SVM

struct SvmParams {
  double lambda = 1e-4;
  std::size_t epochs = 200;
  std::uint64_t seed = 0;
};

// Hinge loss with L2 penalty, trained by stochastic subgradient steps of size
// 1 / (lambda t). The bias is an extra constant feature.
class LinearSvmModel final : public TrainedModel {
 public:
  LinearSvmModel(ScoreVector weights, double bias, std::vector<double> loss)
      : weights_(weights), bias_(bias), loss_(std::move(loss)) {}
  double predict_score(const ScoreVector& x) const override;
  double threshold() const override { return 0.0; }
  nlohmann::json to_json() const override;
  std::vector<double> loss_curve() const override { return loss_; }

  const ScoreVector& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }

 private:
  ScoreVector weights_;
  double bias_;
  std::vector<double> loss_;
};

std::unique_ptr<LinearSvmModel> train_linear_svm(const LabeledDataset& dataset,
                                                 const SvmParams& params);

// ---------------------------------------------------------------------------
// Gradient boosted trees ("XGB")

struct GbtParams {
  std::size_t rounds = 100;
  std::size_t max_depth = 3;
  double learning_rate = 0.1;
  double l2 = 1.0;  // leaf weight penalty
  std::size_t min_samples_leaf = 1;
};

// Newton-boosted regression trees on the logistic loss. Leaf weights are
// -G / (H + l2); splits maximise the matching second-order gain.
class GradientBoostingModel final : public TrainedModel {
 public:
  GradientBoostingModel(double base_margin, double learning_rate,
                        std::vector<std::vector<TreeNode>> trees, std::vector<double> loss)
      : base_margin_(base_margin),
        learning_rate_(learning_rate),
        trees_(std::move(trees)),
        loss_(std::move(loss)) {}

  double margin(const ScoreVector& x) const;
  double predict_score(const ScoreVector& x) const override;
  nlohmann::json to_json() const override;
  // Training log-loss before the first round, then after each round.
  std::vector<double> loss_curve() const override { return loss_; }

 private:
  double base_margin_;
  double learning_rate_;
  std::vector<std::vector<TreeNode>> trees_;  // leaf value = weight
  std::vector<double> loss_;
};

std::unique_ptr<GradientBoostingModel> train_gbt(const LabeledDataset& dataset,
                                                 const GbtParams& params);

// ---------------------------------------------------------------------------
// Registry

using Hyperparams =
    std::variant<KnnParams, GnbParams, TreeParams, ForestParams, SvmParams, GbtParams>;

struct ClassifierSpec {
  std::string name;
  Hyperparams params;

  // Defaults for "dtree", "rforest", "gnb", "svm", "knn" or "gbt".
  static ClassifierSpec defaults(std::string_view name);
  // Copy with the seed of stochastic learners replaced.
  ClassifierSpec with_seed(std::uint64_t seed) const;
  nlohmann::json params_json() const;
};

// Canonical names in the order the grid reports them.
const std::vector<std::string>& classifier_names();

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

}  // namespace pstat::ml

#endif  // PSTAT_CLASSIFIERS_HPP_
