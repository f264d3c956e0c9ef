#include <algorithm>
#include <cmath>
#include <numbers>

#include "pstat/classifiers.hpp"
#include "pstat/errors.hpp"

namespace pstat::ml {

std::array<double, 2> GaussianNbModel::posterior(const ScoreVector& x) const {
  std::array<double, 2> log_joint{};
  for (int c = 0; c < 2; ++c) {
    const auto& s = stats_[c];
    double lj = std::log(s.prior);
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      const double d = x[j] - s.mean[j];
      lj -= 0.5 * std::log(2.0 * std::numbers::pi * s.variance[j]) +
            d * d / (2.0 * s.variance[j]);
    }
    log_joint[c] = lj;
  }
  const double top = std::max(log_joint[0], log_joint[1]);
  const double e0 = std::exp(log_joint[0] - top);
  const double e1 = std::exp(log_joint[1] - top);
  const double p1 = e1 / (e0 + e1);
  return {e0 / (e0 + e1), p1};
}

nlohmann::json GaussianNbModel::to_json() const {
  auto classes = nlohmann::json::array();
  for (const auto& s : stats_) {
    classes.push_back({{"prior", s.prior}, {"mean", s.mean}, {"variance", s.variance}});
  }
  return {{"model", "gnb"}, {"classes", std::move(classes)}};
}

std::unique_ptr<GaussianNbModel> train_gnb(const LabeledDataset& dataset,
                                           const GnbParams& params) {
  require_trainable(dataset);
  if (!(params.variance_floor > 0.0)) throw ConfigError("variance floor must be positive");

  std::array<GaussianNbModel::ClassStats, 2> stats{};
  const double n = static_cast<double>(dataset.size());
  for (int c = 0; c < 2; ++c) {
    // Values are summed in sorted order so the estimates do not depend on
    // row order.
    std::array<std::vector<double>, kNumAttributes> cols;
    for (const auto& r : dataset.rows) {
      if (r.label != c) continue;
      for (std::size_t j = 0; j < kNumAttributes; ++j) cols[j].push_back(r.scores[j]);
    }
    const double nc = static_cast<double>(cols[0].size());
    stats[c].prior = nc / n;
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      auto& v = cols[j];
      std::sort(v.begin(), v.end());
      double sum = 0.0;
      for (double a : v) sum += a;
      const double mean = sum / nc;
      std::vector<double> sq(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
      std::sort(sq.begin(), sq.end());
      double ss = 0.0;
      for (double a : sq) ss += a;
      stats[c].mean[j] = mean;
      stats[c].variance[j] = std::max(ss / nc, params.variance_floor);
    }
  }
  return std::make_unique<GaussianNbModel>(stats);
}

}  // namespace pstat::ml
