#include "pstat/resampling.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pstat/errors.hpp"

namespace pstat::resampling {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kNone: return "none";
    case Method::kSmote: return "smote";
    case Method::kBorderlineSmote: return "borderline_smote";
  }
  return "none";
}

Method parse_method(std::string_view name) {
  if (name == "none") return Method::kNone;
  if (name == "smote") return Method::kSmote;
  if (name == "borderline_smote" || name == "borderline-smote" || name == "borderline") {
    return Method::kBorderlineSmote;
  }
  throw ConfigError("unknown sampler '" + std::string(name) +
                    "'; expected none, smote or borderline_smote");
}

void SamplerConfig::validate() const {
  if (k_neighbors < 1) throw ConfigError("k_neighbors must be >= 1");
  if (method == Method::kBorderlineSmote && m_neighbors < 1) {
    throw ConfigError("m_neighbors must be >= 1");
  }
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw ConfigError("target_ratio must be in (0, 1]");
  }
}

namespace {

double squared_distance(const ScoreVector& a, const ScoreVector& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < kNumAttributes; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

struct ClassSplit {
  int minority_label = 1;
  std::vector<std::size_t> minority;  // row indices, ascending
  std::size_t majority_count = 0;
};

ClassSplit split_classes(const LabeledDataset& ds) {
  const std::size_t pos = ds.count_label(1);
  const std::size_t neg = ds.size() - pos;
  ClassSplit split;
  split.minority_label = pos <= neg ? 1 : 0;
  split.majority_count = std::max(pos, neg);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.rows[i].label == split.minority_label) split.minority.push_back(i);
  }
  return split;
}

std::size_t synthetic_count(const ClassSplit& split, double target_ratio) {
  const double target =
      std::ceil(target_ratio * static_cast<double>(split.majority_count) - 1e-9);
  const auto wanted = static_cast<std::size_t>(std::max(0.0, target));
  return wanted > split.minority.size() ? wanted - split.minority.size() : 0;
}

std::vector<ScoreVector> points_of(const LabeledDataset& ds) {
  std::vector<ScoreVector> pts;
  pts.reserve(ds.size());
  for (const auto& r : ds.rows) pts.push_back(r.scores);
  return pts;
}

std::vector<int> labels_of(const LabeledDataset& ds) {
  std::vector<int> labels;
  labels.reserve(ds.size());
  for (const auto& r : ds.rows) labels.push_back(r.label);
  return labels;
}

// Shared interpolation loop: bases cycle in order, each draws a neighbour
// among its k minority neighbours and a mixing weight.
ResampleResult interpolate(const LabeledDataset& dataset, const SamplerConfig& config,
                           const ClassSplit& split, const std::vector<std::size_t>& bases,
                           std::size_t needed, RandomSource& rng) {
  ResampleResult result;
  result.dataset = dataset;
  result.minority_label = split.minority_label;
  if (needed == 0 || bases.empty()) return result;

  const auto pts = points_of(dataset);
  const auto labels = labels_of(dataset);
  std::vector<std::vector<std::size_t>> neighbours(bases.size());
  for (std::size_t b = 0; b < bases.size(); ++b) {
    neighbours[b] =
        knn_indices(pts, bases[b], config.k_neighbors, labels, split.minority_label);
  }

  result.batch.points.reserve(needed);
  result.batch.parents.reserve(needed);
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t b = s % bases.size();
    const std::size_t base = bases[b];
    const std::size_t nb = neighbours[b][rng.index(config.k_neighbors)];
    const double u = rng.unit();
    const auto& x = pts[base];
    const auto& z = pts[nb];
    ScoreVector p{};
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      // Clamp guards the last-ulp overshoot so points stay inside the segment.
      p[j] = std::clamp(x[j] + u * (z[j] - x[j]), std::min(x[j], z[j]),
                        std::max(x[j], z[j]));
    }
    result.batch.points.push_back(p);
    result.batch.parents.push_back({base, nb, u});
    result.dataset.rows.push_back({"syn-" + std::to_string(s), p, split.minority_label});
  }
  return result;
}

void check_minority(const ClassSplit& split, const SamplerConfig& config) {
  if (split.minority.size() < 2 || split.minority.size() < config.k_neighbors + 1) {
    throw InsufficientNeighborsError(fmt::format(
        "SMOTE needs at least k+1={} minority rows (and at least 2), found {}",
        config.k_neighbors + 1, split.minority.size()));
  }
}

}  // namespace

std::vector<std::size_t> knn_indices(std::span<const ScoreVector> points, std::size_t query,
                                     std::size_t k, std::span<const int> labels,
                                     std::optional<int> restrict_to) {
  if (query >= points.size()) throw DomainError("query index out of range");
  if (restrict_to && labels.size() != points.size()) {
    throw DomainError("label filter needs one label per point");
  }
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == query) continue;
    if (restrict_to && labels[i] != *restrict_to) continue;
    cand.emplace_back(squared_distance(points[query], points[i]), i);
  }
  if (cand.size() < k) {
    throw InsufficientNeighborsError(
        fmt::format("need {} neighbours but only {} points are eligible", k, cand.size()));
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = cand[i].second;
  return out;
}

ResampleResult smote(const LabeledDataset& dataset, const SamplerConfig& config) {
  Mt64Source rng(config.seed);
  return smote(dataset, config, rng);
}

ResampleResult smote(const LabeledDataset& dataset, const SamplerConfig& config,
                     RandomSource& rng) {
  config.validate();
  const auto split = split_classes(dataset);
  const std::size_t needed = synthetic_count(split, config.target_ratio);
  if (needed == 0) {
    ResampleResult unchanged;
    unchanged.dataset = dataset;
    unchanged.minority_label = split.minority_label;
    return unchanged;
  }
  check_minority(split, config);
  return interpolate(dataset, config, split, split.minority, needed, rng);
}

ResampleResult borderline_smote(const LabeledDataset& dataset, const SamplerConfig& config) {
  Mt64Source rng(config.seed);
  return borderline_smote(dataset, config, rng);
}

ResampleResult borderline_smote(const LabeledDataset& dataset, const SamplerConfig& config,
                                RandomSource& rng) {
  config.validate();
  const auto split = split_classes(dataset);
  const std::size_t needed = synthetic_count(split, config.target_ratio);
  if (needed == 0) {
    ResampleResult unchanged;
    unchanged.dataset = dataset;
    unchanged.minority_label = split.minority_label;
    return unchanged;
  }
  check_minority(split, config);

  const auto pts = points_of(dataset);
  const std::size_t m = config.m_neighbors;
  std::vector<std::size_t> danger;
  std::vector<std::size_t> noise;
  for (std::size_t idx : split.minority) {
    std::size_t majority_hits = 0;
    for (std::size_t nb : knn_indices(pts, idx, m)) {
      if (dataset.rows[nb].label != split.minority_label) ++majority_hits;
    }
    if (majority_hits == m) {
      noise.push_back(idx);
    } else if (2 * majority_hits >= m) {
      danger.push_back(idx);
    }
  }

  ResampleResult result;
  if (danger.empty()) {
    result = interpolate(dataset, config, split, split.minority, needed, rng);
    result.borderline_fallback = true;
  } else {
    result = interpolate(dataset, config, split, danger, needed, rng);
  }
  result.danger_indices = std::move(danger);
  result.noise_indices = std::move(noise);
  return result;
}

ResampleResult resample(const LabeledDataset& dataset, const SamplerConfig& config) {
  switch (config.method) {
    case Method::kSmote: return smote(dataset, config);
    case Method::kBorderlineSmote: return borderline_smote(dataset, config);
    case Method::kNone: break;
  }
  config.validate();
  ResampleResult result;
  result.dataset = dataset;
  result.minority_label = split_classes(dataset).minority_label;
  return result;
}

}  // namespace pstat::resampling
