#include <algorithm>
#include <cmath>
#include <numeric>

#include "pstat/classifiers.hpp"
#include "pstat/errors.hpp"
#include "pstat/random.hpp"

namespace pstat::ml {

double LinearSvmModel::predict_score(const ScoreVector& x) const {
  double s = bias_;
  for (std::size_t j = 0; j < kNumAttributes; ++j) s += weights_[j] * x[j];
  return s;
}

nlohmann::json LinearSvmModel::to_json() const {
  return {{"model", "svm"}, {"weights", weights_}, {"bias", bias_}, {"loss", loss_}};
}

std::unique_ptr<LinearSvmModel> train_linear_svm(const LabeledDataset& dataset,
                                                 const SvmParams& params) {
  require_trainable(dataset);
  if (!(params.lambda > 0.0)) throw ConfigError("svm lambda must be positive");
  if (params.epochs < 1) throw ConfigError("svm epochs must be >= 1");

  const std::size_t n = dataset.size();
  const double lambda = params.lambda;
  ScoreVector w{};
  double b = 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Mt64Source rng(params.seed);

  auto margin = [&](const DatasetRow& r) {
    double s = b;
    for (std::size_t j = 0; j < kNumAttributes; ++j) s += w[j] * r.scores[j];
    return (r.label ? 1.0 : -1.0) * s;
  };

  std::vector<double> loss;
  loss.reserve(params.epochs);
  double t = 0.0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    pstat::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      t += 1.0;
      const double eta = 1.0 / (lambda * t);
      const auto& row = dataset.rows[i];
      const bool violated = margin(row) < 1.0;
      const double shrink = 1.0 - eta * lambda;
      for (auto& wj : w) wj *= shrink;
      b *= shrink;
      if (violated) {
        const double ys = row.label ? 1.0 : -1.0;
        for (std::size_t j = 0; j < kNumAttributes; ++j) w[j] += eta * ys * row.scores[j];
        b += eta * ys;
      }
    }
    double hinge = 0.0;
    for (const auto& r : dataset.rows) hinge += std::max(0.0, 1.0 - margin(r));
    double norm2 = b * b;
    for (double wj : w) norm2 += wj * wj;
    loss.push_back(0.5 * lambda * norm2 + hinge / static_cast<double>(n));
  }
  return std::make_unique<LinearSvmModel>(w, b, std::move(loss));
}

}  // namespace pstat::ml
