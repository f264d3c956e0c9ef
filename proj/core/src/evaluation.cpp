#include "pstat/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "pstat/errors.hpp"
#include "pstat/hashing.hpp"

namespace pstat::eval {

Metrics metrics(const ConfusionMatrix& m) {
  if (m.total() == 0) throw DomainError("confusion matrix is empty");
  Metrics out;
  const double tp = static_cast<double>(m.tp);
  if (m.tp + m.fp > 0) {
    out.precision = tp / static_cast<double>(m.tp + m.fp);
  } else {
    out.precision_degenerate = true;
  }
  if (m.tp + m.fn > 0) {
    out.recall = tp / static_cast<double>(m.tp + m.fn);
  } else {
    out.recall_degenerate = true;
  }
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.recall * out.precision / (out.recall + out.precision);
  } else {
    out.f1_degenerate = true;
  }
  out.accuracy = static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
  return out;
}

ConfusionMatrix confusion(const ml::TrainedModel& model, const LabeledDataset& test) {
  ConfusionMatrix m;
  for (const auto& r : test.rows) {
    const int predicted = model.predict(r.scores);
    if (r.label == 1) {
      predicted ? ++m.tp : ++m.fn;
    } else {
      predicted ? ++m.fp : ++m.tn;
    }
  }
  return m;
}

EvalReport cross_eval(const LabeledDataset& train, const LabeledDataset& test,
                      const resampling::SamplerConfig& sampler,
                      const ml::Classifier& classifier) {
  EvalReport report;
  report.provenance = {train.name, std::string(resampling::method_name(sampler.method)),
                       classifier.name(), test.name, sampler.seed};
  report.same_source = train.name == test.name;
  if (test.size() == 0) throw InsufficientDataError("test dataset is empty");

  const auto sampled = resampling::resample(train, sampler);
  report.train_rows = sampled.dataset.size();
  report.train_positives = sampled.dataset.count_label(1);
  const auto model = classifier.train(sampled.dataset);
  report.matrix = confusion(*model, test);
  report.metrics = metrics(report.matrix);
  return report;
}

EvalReport cross_eval(const LabeledDataset& train, const LabeledDataset& test,
                      const resampling::SamplerConfig& sampler,
                      const ml::ClassifierSpec& classifier) {
  const auto c = ml::make_classifier(classifier.with_seed(sampler.seed));
  return cross_eval(train, test, sampler, *c);
}

std::vector<EvalReport> run_grid(const LabeledDataset& train, const LabeledDataset& test,
                                 std::span<const resampling::SamplerConfig> samplers,
                                 std::span<const ml::ClassifierSpec> classifiers,
                                 std::uint64_t master_seed, std::size_t threads) {
  if (samplers.empty()) throw ConfigError("grid needs at least one sampler");
  if (classifiers.empty()) throw ConfigError("grid needs at least one classifier");
  for (const auto& s : samplers) s.validate();

  const std::size_t cells = samplers.size() * classifiers.size();
  std::vector<EvalReport> reports(cells);

  auto run_cell = [&](std::size_t cell) {
    const std::size_t si = cell / classifiers.size();
    const std::size_t ci = cell % classifiers.size();
    auto sampler = samplers[si];
    const auto& spec = classifiers[ci];
    sampler.seed = derive_seed(master_seed,
                               fmt::format("grid/{}/{}/{}/{}", si,
                                           resampling::method_name(sampler.method), ci,
                                           spec.name));
    try {
      reports[cell] = cross_eval(train, test, sampler, spec);
    } catch (const Error& e) {
      EvalReport failed;
      failed.provenance = {train.name, std::string(resampling::method_name(sampler.method)),
                           spec.name, test.name, sampler.seed};
      failed.same_source = train.name == test.name;
      failed.error = e.what();
      reports[cell] = std::move(failed);
    }
  };

  threads = std::clamp<std::size_t>(threads ? threads : 1, 1, cells);
  if (threads == 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < cells; c = next++) run_cell(c);
      });
    }
  }
  return reports;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json doc;
  doc["provenance"] = {{"train", r.provenance.train_name},
                       {"sampler", r.provenance.sampler},
                       {"classifier", r.provenance.classifier},
                       {"test", r.provenance.test_name},
                       {"seed", r.provenance.seed}};
  doc["confusion"] = {{"tp", r.matrix.tp}, {"fn", r.matrix.fn}, {"fp", r.matrix.fp},
                      {"tn", r.matrix.tn}};
  doc["metrics"] = {{"precision", r.metrics.precision},
                    {"recall", r.metrics.recall},
                    {"f1", r.metrics.f1},
                    {"accuracy", r.metrics.accuracy}};
  doc["degenerate"] = {{"precision", r.metrics.precision_degenerate},
                       {"recall", r.metrics.recall_degenerate},
                       {"f1", r.metrics.f1_degenerate}};
  doc["train_rows"] = r.train_rows;
  doc["train_positives"] = r.train_positives;
  doc["same_source"] = r.same_source;
  doc["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return doc;
}

nlohmann::json to_json(std::span<const EvalReport> reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string render_grid(std::span<const EvalReport> reports) {
  std::vector<std::string> samplers;
  std::vector<std::string> classifiers;
  auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : reports) {
    add_unique(samplers, r.provenance.sampler);
    add_unique(classifiers, r.provenance.classifier);
  }

  auto find = [&](const std::string& c, const std::string& s) -> const EvalReport* {
    for (const auto& r : reports) {
      if (r.provenance.classifier == c && r.provenance.sampler == s) return &r;
    }
    return nullptr;
  };

  std::size_t name_w = 10;
  for (const auto& c : classifiers) name_w = std::max(name_w, c.size());
  std::size_t col_w = 8;
  for (const auto& s : samplers) col_w = std::max(col_w, s.size());

  struct MetricColumn {
    const char* title;
    double Metrics::*field;
  };
  const MetricColumn columns[] = {{"precision", &Metrics::precision},
                                  {"recall", &Metrics::recall},
                                  {"f1", &Metrics::f1},
                                  {"accuracy", &Metrics::accuracy}};

  std::ostringstream out;
  if (!reports.empty()) {
    out << "train: " << reports.front().provenance.train_name
        << "  test: " << reports.front().provenance.test_name << "\n";
  }
  for (const auto& col : columns) {
    out << '\n' << fmt::format("{:<{}}", col.title, name_w);
    for (const auto& s : samplers) out << ' ' << fmt::format("{:>{}}", s, col_w);
    out << '\n';
    for (const auto& c : classifiers) {
      out << fmt::format("{:<{}}", c, name_w);
      for (const auto& s : samplers) {
        const auto* r = find(c, s);
        std::string cell = !r ? "-" : r->error ? "error" : fmt::format("{:.4f}", r->metrics.*col.field);
        out << ' ' << fmt::format("{:>{}}", cell, col_w);
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace pstat::eval
