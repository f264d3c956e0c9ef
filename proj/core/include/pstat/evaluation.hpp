#ifndef PSTAT_EVALUATION_HPP_
#define PSTAT_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pstat/classifiers.hpp"
#include "pstat/corpus.hpp"
#include "pstat/resampling.hpp"

namespace pstat::eval {

// Positive class is label 1 (hate).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fn + fp + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// A metric whose denominator is zero is reported as 0.0 with its flag set.
struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;

  bool degenerate() const noexcept {
    return precision_degenerate || recall_degenerate || f1_degenerate;
  }
  bool operator==(const Metrics&) const = default;
};

// Throws DomainError on an empty matrix.
Metrics metrics(const ConfusionMatrix& matrix);

ConfusionMatrix confusion(const ml::TrainedModel& model, const LabeledDataset& test);

struct Provenance {
  std::string train_name;
  std::string sampler;
  std::string classifier;
  std::string test_name;
  std::uint64_t seed = 0;
};

struct EvalReport {
  ConfusionMatrix matrix;
  Metrics metrics;
  Provenance provenance;
  std::size_t train_rows = 0;            // after resampling
  std::size_t train_positives = 0;       // after resampling
  bool same_source = false;              // train and test carry the same name
  std::optional<std::string> error;      // set when the cell failed
};

// Resamples the training set only, trains, and scores the untouched test set.
EvalReport cross_eval(const LabeledDataset& train, const LabeledDataset& test,
                      const resampling::SamplerConfig& sampler,
                      const ml::Classifier& classifier);

// Convenience overload; the classifier seed is taken from the sampler seed.
EvalReport cross_eval(const LabeledDataset& train, const LabeledDataset& test,
                      const resampling::SamplerConfig& sampler,
                      const ml::ClassifierSpec& classifier);

// Every (sampler, classifier) pair in declared order, sampler major. Each cell
// gets its own seed derived from master_seed and the cell's position and
// names; cell failures are recorded in the report and the grid continues.
// Throws ConfigError on an empty list.
std::vector<EvalReport> run_grid(const LabeledDataset& train, const LabeledDataset& test,
                                 std::span<const resampling::SamplerConfig> samplers,
                                 std::span<const ml::ClassifierSpec> classifiers,
                                 std::uint64_t master_seed, std::size_t threads = 1);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(std::span<const EvalReport> reports);

// One table per metric, classifiers down, samplers across.
std::string render_grid(std::span<const EvalReport> reports);

}  // namespace pstat::eval

#endif  // PSTAT_EVALUATION_HPP_
