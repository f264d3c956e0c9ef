#ifndef PSTAT_RESAMPLING_HPP_
#define PSTAT_RESAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pstat/corpus.hpp"
#include "pstat/random.hpp"

namespace pstat::resampling {

enum class Method { kNone, kSmote, kBorderlineSmote };

std::string_view method_name(Method method);
// Accepts "none", "smote", "borderline_smote" (also "borderline-smote").
Method parse_method(std::string_view name);

struct SamplerConfig {
  Method method = Method::kSmote;
  std::size_t k_neighbors = 5;
  std::size_t m_neighbors = 10;  // danger detection in Borderline-SMOTE
  std::uint64_t seed = 0;
  double target_ratio = 1.0;  // minority / majority after sampling

  void validate() const;
};

struct SyntheticParent {
  std::size_t base_index = 0;      // row index in the input dataset
  std::size_t neighbor_index = 0;  // row index in the input dataset
  double u = 0.0;
};

// point[i] == base + u * (neighbor - base), componentwise.
struct SyntheticBatch {
  std::vector<ScoreVector> points;
  std::vector<SyntheticParent> parents;
};

struct ResampleResult {
  LabeledDataset dataset;  // original rows first, then synthetics "syn-<i>"
  SyntheticBatch batch;
  int minority_label = 1;
  // Borderline only: no danger points were found and plain SMOTE was used.
  bool borderline_fallback = false;
  std::vector<std::size_t> danger_indices;
  std::vector<std::size_t> noise_indices;
};

// The k points nearest to points[query] by Euclidean distance, excluding the
// query itself, nearest first; ties go to the lower index. With labels and
// restrict_to set, only points carrying that label are eligible. Throws
// InsufficientNeighborsError when fewer than k points are eligible.
std::vector<std::size_t> knn_indices(std::span<const ScoreVector> points,
                                     std::size_t query, std::size_t k,
                                     std::span<const int> labels = {},
                                     std::optional<int> restrict_to = std::nullopt);

// Appends ceil(target_ratio * majority) - minority synthetic minority rows.
// Bases cycle through the minority rows in index order; for each, one of its
// k minority neighbours is drawn with rng.index(k), then u with rng.unit().
ResampleResult smote(const LabeledDataset& dataset, const SamplerConfig& config);
ResampleResult smote(const LabeledDataset& dataset, const SamplerConfig& config,
                     RandomSource& rng);

// Borderline-SMOTE-1: only minority points whose m nearest neighbours (over
// all rows) hold m' majority points with m/2 <= m' < m act as bases. Falls
// back to smote() and sets borderline_fallback when there are none.
ResampleResult borderline_smote(const LabeledDataset& dataset, const SamplerConfig& config);
ResampleResult borderline_smote(const LabeledDataset& dataset, const SamplerConfig& config,
                                RandomSource& rng);

// Dispatches on config.method; kNone returns the dataset unchanged.
ResampleResult resample(const LabeledDataset& dataset, const SamplerConfig& config);

}  // namespace pstat::resampling

#endif  // PSTAT_RESAMPLING_HPP_
