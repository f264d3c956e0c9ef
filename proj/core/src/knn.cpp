#include <algorithm>

#include "pstat/errors.hpp"
#include "pstat/classifiers.hpp"

namespace pstat::ml {

KnnModel::KnnModel(KnnParams params, std::vector<ScoreVector> points, std::vector<int> labels)
    : params_(params), points_(std::move(points)), labels_(std::move(labels)) {}

double KnnModel::predict_score(const ScoreVector& x) const {
  const std::size_t k = std::min(params_.k, points_.size());
  std::vector<std::pair<double, std::size_t>> dist(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      const double d = x[j] - points_[i][j];
      s += d * d;
    }
    dist[i] = {s, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < k; ++i) positives += static_cast<std::size_t>(labels_[dist[i].second]);
  return static_cast<double>(positives) / static_cast<double>(k + 1);
}

nlohmann::json KnnModel::to_json() const {
  const auto pos = std::count(labels_.begin(), labels_.end(), 1);
  return {{"model", "knn"},
          {"k", params_.k},
          {"training_points", points_.size()},
          {"positives", pos}};
}

std::unique_ptr<KnnModel> train_knn(const LabeledDataset& dataset, const KnnParams& params) {
  require_trainable(dataset);
  if (params.k < 1) throw ConfigError("knn k must be >= 1");
  std::vector<ScoreVector> points;
  std::vector<int> labels;
  for (const auto& r : dataset.rows) {
    points.push_back(r.scores);
    labels.push_back(r.label);
  }
  return std::make_unique<KnnModel>(params, std::move(points), std::move(labels));
}

}  // namespace pstat::ml
