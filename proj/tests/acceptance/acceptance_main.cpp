// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "pstat/anova.hpp"
#include "pstat/classifiers.hpp"
#include "pstat/errors.hpp"
#include "pstat/evaluation.hpp"
#include "pstat/numerics.hpp"
#include "pstat/resampling.hpp"
#include "pstat/similarity.hpp"

namespace fs = std::filesystem;
using namespace pstat;
using testing::Dense;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Every ANOVA table produced anywhere in the suite is checked here.
struct DecompositionLog {
  std::size_t runs = 0;
  std::size_t violations = 0;
  double worst = 0.0;

  void check(const anova::AnovaTable& t) {
    ++runs;
    double sum = t.residual.sum_sq;
    for (const auto& r : t.rows) sum += r.sum_sq;
    const double rel = std::abs(sum - t.ss_total) / std::max(t.ss_total, 1e-300);
    worst = std::max(worst, rel);
    if (std::abs(sum - t.ss_total) > 1e-8 * t.ss_total) ++violations;
  }
};

DecompositionLog g_decomposition;

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "pstat");
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << "  [cli " << args[1] << " exited " << code << "] " << e.str();
  return code;
}

// ---------------------------------------------------------------------------

Verdict anova_oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 gen(20200701);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> pick_p(1, 9);
  double worst = 0.0;
  std::size_t failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = static_cast<std::size_t>(pick_p(gen));
    const std::size_t n = p + 3 + static_cast<std::size_t>(gen() % (48 - p));  // n <= 50
    Dense x(n, std::vector<double>(p + 1, 1.0));
    numerics::Matrix design(n, p + 1, 1.0);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double lin = 0.0;
      for (std::size_t j = 1; j <= p; ++j) {
        x[i][j] = design(i, j) = std::clamp(0.5 + 0.25 * nd(gen), 0.0, 1.0);
        lin += (j % 3 == 0 ? 0.8 : 0.1) * x[i][j];
      }
      y[i] = lin + 0.3 * nd(gen);
    }
    std::vector<std::string> names;
    for (std::size_t j = 1; j <= p; ++j) names.push_back(fmt::format("x{}", j));
    const auto table = anova::anova(design, y, names, true).table;
    g_decomposition.check(table);

    double previous = 0.0;
    testing::ExplicitSs full;
    for (std::size_t i = 0; i < p; ++i) {
      Dense sub(n);
      for (std::size_t r = 0; r < n; ++r) sub[r].assign(x[r].begin(), x[r].begin() + 2 + i);
      const auto ss = testing::explicit_sums_of_squares(sub, y);
      const double rel = std::abs(table.rows[i].sum_sq - (ss.regression - previous)) / ss.total;
      worst = std::max(worst, rel);
      previous = ss.regression;
      full = ss;
    }
    for (double rel : {std::abs(table.residual.sum_sq - full.error) / full.total,
                       std::abs(table.ss_total - full.total) / full.total}) {
      worst = std::max(worst, rel);
    }
    if (worst > 1e-8) ++failures;
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 10.0,
          fmt::format("200 datasets, worst relative deviation {:.2e} (limit 1e-8), {:.2f}s (limit 10s)",
                      worst, elapsed)};
}

Verdict decomposition_identity() {
  // Additional runs with interaction terms and without an intercept, on top
  // of every table produced by the other criteria.
  for (int trial = 0; trial < 300; ++trial) {
    const auto ds = testing::random_dataset(40 + trial, 0.3, 0.05 * (trial % 5), 5000 + trial);
    const auto spec = anova::ModelSpec::parse(
        "", trial % 2 ? "TOXICITY:IDENTITY_ATTACK,INSULT:SPAM" : "");
    g_decomposition.check(anova::anova(ds, spec).table);
    auto no_intercept = spec;
    no_intercept.include_intercept = false;
    g_decomposition.check(anova::anova(ds, no_intercept).table);
  }
  return {g_decomposition.runs > 0 && g_decomposition.violations == 0,
          fmt::format("{} ANOVA runs, {} violations, worst |sum - SS_T|/SS_T {:.2e} (limit 1e-8)",
                      g_decomposition.runs, g_decomposition.violations, g_decomposition.worst)};
}

Verdict p_value_correctness() {
  double worst = 0.0;
  std::size_t points = 0;
  for (double d1 : {1.0, 2.0, 5.0, 443.0}) {
    for (double d2 : {1.0, 2.0, 5.0, 443.0}) {
      for (int i = 0; i < 100; ++i) {
        const double f = std::pow(10.0, -2.0 + 4.0 * i / 99.0);  // 0.01 .. 100
        const double got = numerics::f_sf(f, d1, d2);
        const double want = testing::f_sf_quadrature(f, d1, d2);
        worst = std::max(worst, std::abs(got - want));
        ++points;
      }
    }
  }
  const double closed = numerics::f_sf(56.333, 1, 2);
  const double t = std::sqrt(56.333);
  const double t_identity = 1.0 - t / std::sqrt(2.0 + t * t);
  const bool ok = worst <= 1e-8 && std::abs(closed - 0.01734) <= 1e-5;
  return {ok, fmt::format("{} grid points, worst |f_sf - quadrature| {:.2e} (limit 1e-8); "
                          "F(1,2) at 56.333 = {:.6f}, expected 0.01734 +/- 1e-5 "
                          "(t-distribution identity gives {:.6f})",
                          points, worst, closed, t_identity)};
}

// Deterministic mock corpus. Uses raw engine output only, so it is identical
// on every standard library.
std::string mock_corpus_csv(std::size_t n, std::uint64_t seed) {
  static const char* const kWords[] = {
      "the",   "weather", "friend", "game",  "tonight", "music",  "people", "really",
      "great", "damn",    "idiot",  "kill",  "hate",    "buy now", "love",  "city",
      "team",  "stupid",  "lol",    "today", "never",   "always", "news",   "work"};
  constexpr std::size_t kCount = sizeof(kWords) / sizeof(kWords[0]);
  std::mt19937_64 gen(seed);
  std::string csv = "id,tweet,class\n";
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    const std::size_t len = 4 + gen() % 8;
    for (std::size_t w = 0; w < len; ++w) {
      if (w) text += ' ';
      text += kWords[gen() % kCount];
    }
    const bool hateful = text.find("hate") != std::string::npos ||
                         text.find("kill") != std::string::npos;
    const std::uint64_t roll = gen() % 100;
    const char* cls = (hateful && roll < 60) || roll < 4 ? "0" : (roll % 2 ? "1" : "2");
    csv += fmt::format("t{:04},\"{}\",{}\n", i, text, cls);
  }
  return csv;
}

// Whitespace-separated fields of the first line whose first field is `first`.
std::vector<std::string> line_tokens(const std::string& text, const std::string& first) {
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (!tokens.empty() && tokens[0] == first) return tokens;
  }
  return {};
}

Verdict table_shape(bool write_golden) {
  testing::TempDir dir("accept-shape");
  testing::write_file(dir / "corpus.csv", mock_corpus_csv(453, 453));
  if (run_cli({"score", "--input", (dir / "corpus.csv").string(), "--id-col", "id", "--output",
               (dir / "mock453.csv").string(), "--mode", "mock", "--cache-dir",
               (dir / "cache").string()}) != 0) {
    return {false, "score step failed"};
  }
  std::string table;
  if (run_cli({"anova", "--scores", (dir / "mock453.csv").string()}, &table) != 0) {
    return {false, "anova step failed"};
  }
  const fs::path golden = fs::path(PSTAT_GOLDEN_DIR) / "mock453_anova.txt";
  if (write_golden) testing::write_file(golden, table);

  const auto result = anova::anova(load_dataset(dir / "mock453.csv"), anova::ModelSpec::canonical());
  g_decomposition.check(result.table);
  std::vector<std::string> problems;
  if (result.table.rows.size() != 9) problems.push_back("expected 9 term rows");
  for (std::size_t i = 0; i < result.table.rows.size(); ++i) {
    const auto& r = result.table.rows[i];
    if (r.df != 1) problems.push_back(r.term + " df != 1");
    if (r.term != kAttributeNames[i]) problems.push_back("row order");
    // Legend: 0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1
    const std::string code = r.p_value <= 0.001 ? "***"
                             : r.p_value <= 0.01 ? "**"
                             : r.p_value <= 0.05 ? "*"
                             : r.p_value <= 0.1  ? "."
                                                 : "";
    if (r.signif_code != code) problems.push_back(r.term + " code");
    const auto tokens = line_tokens(table, r.term);
    if (tokens.size() < 6 || tokens[1] != "1") problems.push_back(r.term + " line");
    if (tokens.size() != (code.empty() ? 6u : 7u) || (!code.empty() && tokens.back() != code)) {
      problems.push_back(r.term + " printed code");
    }
  }
  if (result.table.residual.df != 443) problems.push_back("residual df != 443");
  const auto residual_tokens = line_tokens(table, "Residuals");
  if (residual_tokens.size() != 4 || residual_tokens[1] != "443") problems.push_back("Residuals 443 line");
  if (table.find("Signif. codes:  0 '***' 0.001 '**' 0.01 '*' 0.05 '.' 0.1 ' ' 1") ==
      std::string::npos) {
    problems.push_back("legend");
  }
  std::string expected;
  try {
    expected = testing::read_file(golden);
  } catch (const std::exception& e) {
    problems.push_back(e.what());
  }
  if (table != expected) problems.push_back("differs from golden file");

  std::size_t starred = 0;
  for (const auto& r : result.table.rows) starred += !r.signif_code.empty();
  std::string detail = fmt::format("9 term rows, Residuals 443, {} rows with a code", starred);
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

Verdict similarity_properties() {
  std::mt19937_64 gen(1000);
  std::uniform_real_distribution<double> exponent(-300.0, 0.0);
  std::uniform_int_distribution<int> length(1, 12);
  std::size_t violations = 0;
  auto make = [](std::vector<double> v) {
    anova::SignificanceVector s;
    for (std::size_t i = 0; i < v.size(); ++i) s.terms.push_back(fmt::format("t{}", i));
    s.values = std::move(v);
    return s;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const int len = length(gen);
    std::vector<double> a(len), b(len);
    for (int i = 0; i < len; ++i) {
      a[i] = std::pow(10.0, exponent(gen));
      b[i] = std::pow(10.0, exponent(gen));
    }
    const auto u = make(a), v = make(b);
    const double s = similarity(u, v);
    if (s != similarity(v, u) || !(s > 0.0) || s > 1.0 || similarity(u, u) != 1.0) ++violations;
  }
  const double e1 = similarity(make({0.5, 0.2}), make({1.0, 0.2}));
  const double e2 = similarity(make({1e-12, 0.05, 0.9}), make({1e-6, 0.05, 0.09}));
  const double e2_expected = (1e-12 / 1e-6 + 1.0 + 0.09 / 0.9) / 3.0;
  const double e3 = similarity(make({0.3, 0.004, 0.7}), make({0.3, 0.004, 0.7}));
  const bool examples = e1 == 0.75 && e2 == e2_expected && std::abs(e2 - 0.3667) < 5e-5 && e3 == 1.0;
  return {violations == 0 && examples,
          fmt::format("1000 pairs, {} violations; examples {:.4f}, {:.4f}, {:.4f}", violations, e1,
                      e2, e3)};
}

Verdict smote_properties() {
  std::mt19937_64 gen(606);
  std::size_t bad_balance = 0, bad_reconstruct = 0, bad_box = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 60 + gen() % 200;
    const double p1 = 0.05 + 0.3 * static_cast<double>(gen() % 100) / 100.0;
    auto ds = testing::random_dataset(n, p1, 0.2, 9000 + trial);
    if (ds.count_label(1) < 6) {
      for (std::size_t i = 0; i < 6; ++i) ds.rows[i].label = 1;
    }
    resampling::SamplerConfig cfg;
    cfg.method = trial % 2 ? resampling::Method::kSmote : resampling::Method::kBorderlineSmote;
    cfg.seed = gen();
    const auto out = resampling::resample(ds, cfg);
    if (out.dataset.count_label(0) != out.dataset.count_label(1)) ++bad_balance;

    ScoreVector lo, hi;
    lo.fill(1.0);
    hi.fill(0.0);
    for (const auto& r : ds.rows) {
      if (r.label != out.minority_label) continue;
      for (std::size_t j = 0; j < kNumAttributes; ++j) {
        lo[j] = std::min(lo[j], r.scores[j]);
        hi[j] = std::max(hi[j], r.scores[j]);
      }
    }
    for (std::size_t s = 0; s < out.batch.points.size(); ++s) {
      const auto& par = out.batch.parents[s];
      const auto& xi = ds.rows[par.base_index].scores;
      const auto& xp = ds.rows[par.neighbor_index].scores;
      for (std::size_t j = 0; j < kNumAttributes; ++j) {
        const double d = std::abs(out.batch.points[s][j] - (xi[j] + par.u * (xp[j] - xi[j])));
        worst = std::max(worst, d);
        if (d > 1e-15) ++bad_reconstruct;
        if (out.batch.points[s][j] < lo[j] || out.batch.points[s][j] > hi[j]) ++bad_box;
      }
    }
  }

  // Noise never parents: an isolated minority point inside the majority
  // cluster next to a mixed region.
  std::vector<ScoreVector> pts;
  std::vector<int> labels;
  auto add = [&](double v, int label) {
    ScoreVector s;
    s.fill(v);
    pts.push_back(s);
    labels.push_back(label);
  };
  for (int i = 0; i < 12; ++i) add(0.1 + 0.005 * i, 0);
  add(0.125, 1);
  for (double v : {0.3, 0.33, 0.34, 0.5, 0.51, 0.52, 0.53}) add(v, 1);
  for (double v : {0.28, 0.32}) add(v, 0);
  resampling::SamplerConfig bcfg;
  bcfg.k_neighbors = 2;
  bcfg.m_neighbors = 4;
  const auto border = resampling::borderline_smote(testing::make_dataset(pts, labels), bcfg);
  bool noise_ok = std::find(border.noise_indices.begin(), border.noise_indices.end(), 12u) !=
                      border.noise_indices.end() &&
                  !border.borderline_fallback && !border.batch.parents.empty();
  for (const auto& p : border.batch.parents) {
    for (auto ni : border.noise_indices) noise_ok = noise_ok && p.base_index != ni;
  }

  // Safe-only data triggers the fallback.
  pts.clear();
  labels.clear();
  for (int i = 0; i < 6; ++i) add(0.9 + 0.01 * i, 1);
  for (int i = 0; i < 12; ++i) add(0.1 + 0.01 * i, 0);
  bcfg.k_neighbors = 3;
  const auto safe = resampling::borderline_smote(testing::make_dataset(pts, labels), bcfg);
  const bool fallback_ok = safe.borderline_fallback && safe.danger_indices.empty();

  const bool ok = bad_balance == 0 && bad_reconstruct == 0 && bad_box == 0 && noise_ok && fallback_ok;
  return {ok, fmt::format("100 datasets: {} unbalanced, {} off-segment (worst {:.1e}, limit 1e-15), "
                          "{} outside minority box; noise excluded: {}; safe-only fallback: {}",
                          bad_balance, bad_reconstruct, worst, bad_box, noise_ok ? "yes" : "no",
                          fallback_ok ? "yes" : "no")};
}

Verdict classifier_sanity() {
  std::mt19937_64 gen(40);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoreVector> pts;
  std::vector<int> labels;
  // Two boxes, [0.1,0.4]^9 and [0.6,0.9]^9; the hyperplane sum(x) = 4.5 separates them.
  for (int i = 0; i < 40; ++i) {
    const int label = i % 2;
    ScoreVector s;
    for (auto& v : s) v = (label ? 0.6 : 0.1) + 0.3 * u(gen);
    pts.push_back(s);
    labels.push_back(label);
  }
  const auto ds = testing::make_dataset(pts, labels, "separable40");
  std::vector<std::string> problems;
  for (const auto& name : ml::classifier_names()) {
    const auto spec = ml::ClassifierSpec::defaults(name).with_seed(7);
    const auto a = ml::make_classifier(spec)->train(ds);
    const auto b = ml::make_classifier(spec)->train(ds);
    std::size_t correct = 0;
    bool same = true;
    for (const auto& r : ds.rows) {
      correct += a->predict(r.scores) == r.label;
      same = same && a->predict_score(r.scores) == b->predict_score(r.scores);
    }
    for (int probe = 0; probe < 200; ++probe) {
      ScoreVector q;
      for (auto& v : q) v = u(gen);
      same = same && a->predict_score(q) == b->predict_score(q);
    }
    if (correct != ds.size()) problems.push_back(fmt::format("{} {}/40", name, correct));
    if (!same) problems.push_back(name + " not deterministic");
  }
  std::string detail = "6 classifiers, 40 separable points, two runs each";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

// Train distribution A: 5% minority, one Gaussian cluster per class.
// Test distribution B: the minority cluster drifts towards the majority and
// the class balance changes.
LabeledDataset gaussian_clusters(std::size_t n, double minority_share, double majority_mean,
                                 double minority_mean, double sd, std::uint64_t seed,
                                 std::string name) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  LabeledDataset ds;
  ds.name = std::move(name);
  const auto minority = static_cast<std::size_t>(std::round(minority_share * static_cast<double>(n)));
  for (std::size_t i = 0; i < n; ++i) {
    DatasetRow row;
    row.id = fmt::format("{}-{}", ds.name, i);
    row.label = i < minority ? 1 : 0;
    const double mean = row.label ? minority_mean : majority_mean;
    for (auto& v : row.scores) v = std::clamp(mean + sd * nd(gen), 0.0, 1.0);
    ds.rows.push_back(row);
  }
  return ds;
}

Verdict directional_reproduction() {
  const auto start = Clock::now();
  const auto train = gaussian_clusters(2000, 0.05, 0.35, 0.6, 0.12, 8101, "A");
  const auto test = gaussian_clusters(1000, 0.3, 0.35, 0.52, 0.14, 8102, "B");
  std::vector<resampling::SamplerConfig> samplers(2);
  samplers[0].method = resampling::Method::kNone;
  samplers[1].method = resampling::Method::kSmote;
  std::vector<ml::ClassifierSpec> classifiers;
  for (const auto& n : ml::classifier_names()) classifiers.push_back(ml::ClassifierSpec::defaults(n));
  const auto reports = eval::run_grid(train, test, samplers, classifiers, 2020, 0);
  const double elapsed = seconds_since(start);

  std::vector<std::string> lines;
  bool ok = elapsed < 120.0;
  const std::size_t c = classifiers.size();
  for (std::size_t i = 0; i < c; ++i) {
    const auto& none = reports[i];
    const auto& smote = reports[c + i];
    if (none.error || smote.error) {
      ok = false;
      lines.push_back(classifiers[i].name + " error");
      continue;
    }
    const bool f1_up = smote.metrics.f1 > none.metrics.f1;
    const bool recall_up = smote.metrics.recall > none.metrics.recall;
    ok = ok && f1_up && recall_up;
    lines.push_back(fmt::format("{} F1 {:.3f}->{:.3f} R {:.3f}->{:.3f} P {:.3f}->{:.3f} A {:.3f}->{:.3f}{}",
                                classifiers[i].name, none.metrics.f1, smote.metrics.f1,
                                none.metrics.recall, smote.metrics.recall, none.metrics.precision,
                                smote.metrics.precision, none.metrics.accuracy,
                                smote.metrics.accuracy, f1_up && recall_up ? "" : " (NOT improved)"));
  }
  std::string detail = fmt::format("{:.1f}s (limit 120s)", elapsed);
  for (const auto& l : lines) detail += "\n      " + l;
  return {ok, detail};
}

Verdict qq_diagnostic() {
  std::mt19937_64 gen(1000);
  std::normal_distribution<double> nd;
  const std::size_t n = 1000;
  numerics::Matrix design(n, 3, 1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 1) = nd(gen);
    design(i, 2) = nd(gen);
    y[i] = 0.5 + 0.3 * design(i, 1) - 0.2 * design(i, 2) + nd(gen);
  }
  const auto result = anova::anova(design, y, {"a", "b"}, true);
  g_decomposition.check(result.table);
  const auto pts = anova::qq_data(result.diagnostics);
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p.theoretical;
    my += p.sample;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (const auto& p : pts) {
    sxy += (p.theoretical - mx) * (p.sample - my);
    sxx += (p.theoretical - mx) * (p.theoretical - mx);
    syy += (p.sample - my) * (p.sample - my);
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return {r > 0.995, fmt::format("1000 residuals, Pearson r = {:.5f} (limit > 0.995)", r)};
}

struct PipelineOutputs {
  int code = 0;
  std::vector<std::string> files;
};

PipelineOutputs run_pipeline(const fs::path& dir, const std::string& corpus) {
  PipelineOutputs out;
  testing::write_file(dir / "corpus.csv", corpus);
  const auto f = [&](const char* leaf) { return (dir / leaf).string(); };
  const std::vector<std::vector<std::string>> steps{
      {"score", "--input", f("corpus.csv"), "--id-col", "id", "--output", f("scores.csv"),
       "--mode", "mock", "--cache-dir", f("cache")},
      {"anova", "--scores", f("scores.csv"), "--out", f("anova.txt")},
      {"resample", "--method", "borderline_smote", "--in", f("scores.csv"), "--out",
       f("resampled.csv"), "--seed", "31"},
      {"eval", "--train", f("resampled.csv"), "--test", f("scores.csv"), "--out", f("eval.json"),
       "--seed", "31", "--threads", "2"},
  };
  for (const auto& step : steps) {
    out.code = run_cli(step);
    if (out.code != 0) return out;
  }
  for (const char* leaf :
       {"scores.csv", "anova.txt", "anova.significance.json", "resampled.csv", "eval.json"}) {
    out.files.push_back(testing::read_file(dir / leaf));
  }
  return out;
}

Verdict end_to_end() {
  const std::string corpus = mock_corpus_csv(500, 500);
  testing::TempDir first("accept-e2e-a");
  testing::TempDir second("accept-e2e-b");
  const auto a = run_pipeline(first.path(), corpus);
  const auto b = run_pipeline(second.path(), corpus);
  if (a.code != 0 || b.code != 0) {
    return {false, fmt::format("exit codes {} and {}", a.code, b.code)};
  }
  const bool identical = a.files == b.files;
  const auto reports = nlohmann::json::parse(a.files.back());
  return {identical && reports.size() == 18,
          fmt::format("score -> anova -> resample -> eval on 500 rows: exit 0, {} outputs {}, "
                      "{} eval reports",
                      a.files.size(), identical ? "byte-identical" : "DIFFER", reports.size())};
}

}  // namespace

int main(int argc, char** argv) {
  bool write_golden = false;
  for (int i = 1; i < argc; ++i) write_golden = write_golden || std::strcmp(argv[i], "--write-golden") == 0;

  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  // Decomposition identity runs after the others so it sees all of their tables.
  const std::vector<Criterion> criteria{
      {1, "anova-oracle-equivalence", anova_oracle_equivalence},
      {3, "p-value-correctness", p_value_correctness},
      {4, "table-shape", [&] { return table_shape(write_golden); }},
      {5, "similarity", similarity_properties},
      {6, "smote-properties", smote_properties},
      {7, "classifier-sanity", classifier_sanity},
      {8, "directional-reproduction", directional_reproduction},
      {9, "qq-diagnostic", qq_diagnostic},
      {10, "end-to-end-pipeline", end_to_end},
      {2, "decomposition-identity", decomposition_identity},
  };
  std::vector<std::pair<int, std::string>> lines;
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    lines.emplace_back(c.id, fmt::format("{} {:>2} {}: {}", v.pass ? "PASS" : "FAIL", c.id, c.name,
                                         v.detail));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, line] : lines) std::cout << line << '\n';
  std::cout << fmt::format("{} of {} criteria passed\n", lines.size() - failed, lines.size());
  return failed ? 1 : 0;
}
