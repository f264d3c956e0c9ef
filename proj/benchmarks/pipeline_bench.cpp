#include <algorithm>
#include <random>

#include <benchmark/benchmark.h>

#include "pstat/anova.hpp"
#include "pstat/classifiers.hpp"
#include "pstat/resampling.hpp"

namespace {

pstat::LabeledDataset synthetic(std::size_t n, double minority, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 0.15);
  std::uniform_real_distribution<double> u;
  pstat::LabeledDataset ds;
  ds.name = "bench";
  for (std::size_t i = 0; i < n; ++i) {
    pstat::DatasetRow row;
    row.id = std::to_string(i);
    row.label = u(gen) < minority ? 1 : 0;
    for (auto& v : row.scores) v = std::clamp((row.label ? 0.6 : 0.35) + nd(gen), 0.0, 1.0);
    ds.rows.push_back(row);
  }
  return ds;
}

void BM_Anova(benchmark::State& state) {
  const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 0.3, 2);
  const auto spec = pstat::anova::ModelSpec::canonical();
  for (auto _ : state) benchmark::DoNotOptimize(pstat::anova::anova(ds, spec));
}
BENCHMARK(BM_Anova)->Arg(453)->Arg(5000)->Arg(25000)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  const auto ds = synthetic(static_cast<std::size_t>(state.range(0)), 0.06, 3);
  pstat::resampling::SamplerConfig cfg;
  cfg.method = state.range(1) ? pstat::resampling::Method::kBorderlineSmote
                              : pstat::resampling::Method::kSmote;
  for (auto _ : state) benchmark::DoNotOptimize(pstat::resampling::resample(ds, cfg));
}
BENCHMARK(BM_Smote)->Args({2000, 0})->Args({2000, 1})->Args({10000, 0})->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const auto train = synthetic(static_cast<std::size_t>(state.range(0)), 0.3, 4);
  const auto query = synthetic(100, 0.3, 5);
  const auto model = pstat::ml::train_knn(train, {});
  for (auto _ : state) {
    for (const auto& r : query.rows) benchmark::DoNotOptimize(model->predict_score(r.scores));
  }
}
BENCHMARK(BM_KnnPredict)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_TrainClassifier(benchmark::State& state, const char* name) {
  const auto train = synthetic(2000, 0.2, 6);
  auto spec = pstat::ml::ClassifierSpec::defaults(name);
  if (auto* forest = std::get_if<pstat::ml::ForestParams>(&spec.params)) forest->threads = 1;
  const auto classifier = pstat::ml::make_classifier(spec);
  for (auto _ : state) benchmark::DoNotOptimize(classifier->train(train));
}
BENCHMARK_CAPTURE(BM_TrainClassifier, dtree, "dtree")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainClassifier, rforest, "rforest")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainClassifier, gnb, "gnb")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainClassifier, svm, "svm")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainClassifier, gbt, "gbt")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
