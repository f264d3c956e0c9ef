#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pstat/anova.hpp"
#include "pstat/classifiers.hpp"
#include "pstat/corpus.hpp"
#include "pstat/errors.hpp"
#include "pstat/evaluation.hpp"
#include "pstat/hashing.hpp"
#include "pstat/perspective_client.hpp"
#include "pstat/resampling.hpp"
#include "pstat/similarity.hpp"

namespace pstat::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Reproducibility record written beside every primary output.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;

  void write(const fs::path& path) const {
    json doc;
    doc["tool"] = "pstat";
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["argv"] = argv;
    doc["config"] = config;
    doc["seed"] = seed ? json(*seed) : json(nullptr);
    json in = json::object();
    for (const auto& p : inputs) in[p.string()] = sha256_file_hex(p);
    doc["inputs"] = std::move(in);
    json out = json::array();
    for (const auto& p : outputs) out.push_back(p.string());
    doc["outputs"] = std::move(out);
    doc["timestamp"] = utc_timestamp();
    write_text_file(path, doc.dump(2) + "\n");
  }
};

fs::path manifest_path(const std::string& override_path, const fs::path& primary) {
  if (!override_path.empty()) return override_path;
  return primary.string() + ".manifest.json";
}

std::string format_score(double v) {
  std::string s = fmt::format("{:.10g}", v);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

// ---------------------------------------------------------------------------

struct ScoreOptions {
  std::string input;
  std::string text_col = "tweet";
  std::string label_col = "class";
  std::string id_col;
  std::string positive = "0";
  std::string output;
  std::string mode = "live";
  std::string cache_dir = ".pstat-cache";
  double qps = 1.0;
  int max_retries = 5;
  double backoff = 2.0;
  std::string api_key_env = "PERSPECTIVE_API_KEY";
  std::string triggers_file;
};

std::vector<perspective::MockTrigger> load_triggers(const fs::path& path) {
  const json doc = read_json_file(path);
  if (!doc.is_array()) throw SchemaError("trigger file must be a JSON array");
  std::vector<perspective::MockTrigger> out;
  for (const auto& item : doc) {
    perspective::MockTrigger t;
    t.substring = item.at("substring").get<std::string>();
    for (const auto& a : item.at("attributes")) {
      t.attributes.push_back(static_cast<Attribute>(require_attribute(a.get<std::string>())));
    }
    out.push_back(std::move(t));
  }
  return out;
}

int cmd_score(const ScoreOptions& o, Manifest& manifest, std::ostream& out, std::ostream& err) {
  CorpusColumns cols;
  cols.text_column = o.text_col;
  cols.label_column = o.label_col;
  if (!o.id_col.empty()) cols.id_column = o.id_col;
  const auto instances = load_corpus(o.input, cols);
  const auto mapping = LabelMapping::from_list("cli", o.positive);
  const auto labels = binarize(instances, mapping);

  perspective::ClientConfig cfg;
  cfg.mode = perspective::parse_mode(o.mode);
  cfg.cache_dir = o.cache_dir;
  cfg.qps_limit = o.qps;
  cfg.max_retries = o.max_retries;
  cfg.backoff_base_seconds = o.backoff;
  cfg.api_key_env = o.api_key_env;
  if (!o.triggers_file.empty()) cfg.mock_triggers = load_triggers(o.triggers_file);

  perspective::Client client(cfg);
  const auto result = client.analyze_corpus(instances);

  std::map<std::string, int> label_of;
  for (const auto& l : labels) label_of[l.id] = l.label;
  LabeledDataset ds;
  ds.name = fs::path(o.output).stem().string();
  for (const auto& [id, scores] : result.scored) ds.rows.push_back({id, scores, label_of.at(id)});
  save_dataset(o.output, ds);

  manifest.inputs = {o.input};
  manifest.outputs = {o.output};
  manifest.config = {{"text_col", o.text_col}, {"label_col", o.label_col},
                     {"id_col", o.id_col},     {"positive", o.positive},
                     {"mode", o.mode},         {"cache_dir", o.cache_dir},
                     {"qps", o.qps},           {"max_retries", o.max_retries},
                     {"backoff", o.backoff},   {"api_key_env", o.api_key_env},
                     {"mock_triggers", o.triggers_file}};
  manifest.config["requests_sent"] = client.requests_sent();

  out << fmt::format("scored {} of {} texts ({} requests)\n", result.scored.size(),
                     instances.size(), client.requests_sent());
  if (result.failures.empty()) return kExitOk;

  json failures = json::array();
  for (const auto& f : result.failures) {
    failures.push_back({{"id", f.id}, {"status", f.status}, {"error", f.error}});
    err << "failed: " << f.id << ": " << f.error << '\n';
  }
  const fs::path report = o.output + ".failures.json";
  write_text_file(report, failures.dump(2) + "\n");
  manifest.outputs.push_back(report);
  err << result.failures.size() << " texts failed; see " << report.string() << '\n';
  return kExitPartial;
}

// ---------------------------------------------------------------------------

struct AnovaOptions {
  std::string scores;
  std::string order;
  std::string interactions;
  std::string format = "text";
  std::string out;
  std::string sig_out;
};

LabeledDataset load_reporting(const fs::path& path, std::ostream& err) {
  DatasetLoadReport report;
  auto ds = load_dataset(path, &report);
  for (const auto& x : report.excluded) {
    err << fmt::format("excluded line {} (id '{}'): {}\n", x.line, x.id, x.reason);
  }
  return ds;
}

int cmd_anova(const AnovaOptions& o, Manifest& manifest, std::ostream& out, std::ostream& err) {
  const auto spec = anova::ModelSpec::parse(o.order, o.interactions);
  const auto ds = load_reporting(o.scores, err);
  const auto result = anova::anova(ds, spec);

  std::string rendered;
  if (o.format == "text") {
    rendered = anova::render_text(result.table);
  } else if (o.format == "json") {
    json doc;
    doc["dataset"] = ds.name;
    doc["table"] = anova::to_json(result.table);
    doc["coefficients"] = json::object();
    for (std::size_t i = 0; i < result.diagnostics.coefficients.size(); ++i) {
      doc["coefficients"][result.diagnostics.coefficient_names[i]] =
          result.diagnostics.coefficients[i];
    }
    doc["sigma2_hat"] = result.diagnostics.sigma2_hat;
    rendered = doc.dump(2) + "\n";
  } else {
    throw ConfigError("unknown format '" + o.format + "'; expected text or json");
  }

  fs::path sig_path = o.sig_out;
  if (sig_path.empty()) {
    const fs::path base = o.out.empty() ? fs::path(o.scores) : fs::path(o.out);
    sig_path = base.parent_path() / (base.stem().string() + ".significance.json");
  }
  const auto sig = anova::significance_vector(result.table);
  write_text_file(sig_path, anova::to_json(sig).dump(2) + "\n");

  manifest.inputs = {o.scores};
  if (o.out.empty()) {
    out << rendered;
  } else {
    write_text_file(o.out, rendered);
    manifest.outputs.push_back(o.out);
  }
  manifest.outputs.push_back(sig_path);
  manifest.config = {{"order", o.order}, {"interactions", o.interactions}, {"format", o.format}};
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimilarityOptions {
  std::string a;
  std::string b;
  std::string out;
};

int cmd_similarity(const SimilarityOptions& o, Manifest& manifest, std::ostream& out) {
  const auto u = anova::significance_vector_from_json(read_json_file(o.a));
  const auto v = anova::significance_vector_from_json(read_json_file(o.b));
  const double s = similarity(u, v);
  out << format_score(s) << '\n';
  manifest.inputs = {o.a, o.b};
  if (!o.out.empty()) {
    json doc = {{"a", o.a}, {"b", o.b}, {"terms", u.terms}, {"similarity", s}};
    write_text_file(o.out, doc.dump(2) + "\n");
    manifest.outputs.push_back(o.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct QqOptions {
  std::string scores;
  std::string out;
  std::string order;
  std::string interactions;
};

int cmd_qq(const QqOptions& o, Manifest& manifest, std::ostream& err) {
  const auto spec = anova::ModelSpec::parse(o.order, o.interactions);
  const auto ds = load_reporting(o.scores, err);
  const auto result = anova::anova(ds, spec);
  const auto points = anova::qq_data(result.diagnostics);
  std::string csv = "theoretical,sample\n";
  for (const auto& p : points) csv += fmt::format("{:.17g},{:.17g}\n", p.theoretical, p.sample);
  write_text_file(o.out, csv);
  manifest.inputs = {o.scores};
  manifest.outputs = {o.out};
  manifest.config = {{"order", o.order}, {"interactions", o.interactions}};
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ResampleOptions {
  std::string method = "smote";
  std::size_t k = 5;
  std::size_t m = 10;
  double ratio = 1.0;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
};

int cmd_resample(const ResampleOptions& o, Manifest& manifest, std::ostream& out,
                 std::ostream& err) {
  const auto ds = load_reporting(o.in, err);
  resampling::SamplerConfig cfg;
  cfg.method = resampling::parse_method(o.method);
  cfg.k_neighbors = o.k;
  cfg.m_neighbors = o.m;
  cfg.target_ratio = o.ratio;
  cfg.seed = derive_seed(o.seed, "resample");
  const auto result = resampling::resample(ds, cfg);
  auto resampled = result.dataset;
  resampled.name = fs::path(o.out).stem().string();
  save_dataset(o.out, resampled);

  const int minority = result.minority_label;
  out << fmt::format("{}: minority label {} {} -> {}, majority {}, {} synthetic rows\n",
                     resampling::method_name(cfg.method), minority, ds.count_label(minority),
                     resampled.count_label(minority), resampled.count_label(1 - minority),
                     result.batch.points.size());
  if (result.borderline_fallback) {
    err << "warning: no borderline (danger) minority points; fell back to plain SMOTE\n";
  }
  manifest.seed = o.seed;
  manifest.inputs = {o.in};
  manifest.outputs = {o.out};
  manifest.config = {{"method", o.method}, {"k", o.k}, {"m", o.m}, {"ratio", o.ratio},
                     {"stage_seed", cfg.seed},
                     {"borderline_fallback", result.borderline_fallback}};
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string train;
  std::string test;
  std::string samplers = "none,smote,borderline_smote";
  std::string classifiers = "dtree,rforest,gnb,svm,knn,gbt";
  std::size_t k = 5;
  std::size_t m = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
};

int cmd_eval(const EvalOptions& o, Manifest& manifest, std::ostream& out, std::ostream& err) {
  const auto train = load_reporting(o.train, err);
  const auto test = load_reporting(o.test, err);

  std::vector<resampling::SamplerConfig> samplers;
  for (const auto& name : split_list(o.samplers)) {
    resampling::SamplerConfig cfg;
    cfg.method = resampling::parse_method(name);
    cfg.k_neighbors = o.k;
    cfg.m_neighbors = o.m;
    samplers.push_back(cfg);
  }
  std::vector<ml::ClassifierSpec> classifiers;
  for (const auto& name : split_list(o.classifiers)) {
    classifiers.push_back(ml::ClassifierSpec::defaults(name));
  }
  if (samplers.empty()) throw ConfigError("--samplers is empty");
  if (classifiers.empty()) throw ConfigError("--classifiers is empty");

  const auto reports = eval::run_grid(train, test, samplers, classifiers,
                                      derive_seed(o.seed, "eval"), o.threads);
  write_text_file(o.out, eval::to_json(std::span<const eval::EvalReport>(reports)).dump(2) + "\n");
  out << eval::render_grid(reports);

  manifest.seed = o.seed;
  manifest.inputs = {o.train, o.test};
  manifest.outputs = {o.out};
  json cls = json::array();
  for (const auto& c : classifiers) cls.push_back({{"name", c.name}, {"params", c.params_json()}});
  manifest.config = {{"samplers", split_list(o.samplers)}, {"classifiers", std::move(cls)},
                     {"k", o.k}, {"m", o.m}, {"threads", o.threads}};

  int failed = 0;
  for (const auto& r : reports) {
    if (r.error) {
      ++failed;
      err << fmt::format("cell {}/{} failed: {}\n", r.provenance.sampler,
                         r.provenance.classifier, *r.error);
    }
  }
  return failed ? kExitPartial : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perspective score statistics: scoring, ANOVA, similarity, resampling, "
               "cross-dataset evaluation"};
  app.name(args.empty() ? "pstat" : fs::path(args[0]).filename().string());
  app.set_config("--config", "", "TOML/INI file whose keys mirror the flags");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  std::string manifest_override;
  app.add_option("--manifest", manifest_override, "Manifest path (default: <output>.manifest.json)");

  ScoreOptions score;
  auto* s = app.add_subcommand("score", "Attach the nine attribute scores to a labeled corpus");
  s->add_option("--input", score.input, "Corpus CSV")->required()->check(CLI::ExistingFile);
  s->add_option("--text-col", score.text_col, "Text column")->capture_default_str();
  s->add_option("--label-col", score.label_col, "Raw label column")->capture_default_str();
  s->add_option("--id-col", score.id_col, "Id column (default: row index)");
  s->add_option("--positive", score.positive, "Comma separated raw labels mapped to 1")
      ->capture_default_str();
  s->add_option("--output", score.output, "Score CSV to write")->required();
  s->add_option("--mode", score.mode, "live or mock")
      ->check(CLI::IsMember({"live", "mock"}))
      ->capture_default_str();
  s->add_option("--cache-dir", score.cache_dir, "Score cache directory")->capture_default_str();
  s->add_option("--qps", score.qps, "Request rate limit")->capture_default_str();
  s->add_option("--max-retries", score.max_retries, "Retries per text")->capture_default_str();
  s->add_option("--backoff", score.backoff, "Backoff base in seconds")->capture_default_str();
  s->add_option("--api-key-env", score.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  s->add_option("--mock-triggers", score.triggers_file, "JSON trigger list for mock mode")
      ->check(CLI::ExistingFile);

  AnovaOptions an;
  auto* a = app.add_subcommand("anova", "Sequential ANOVA table of label ~ scores");
  a->add_option("--scores", an.scores, "Score CSV")->required()->check(CLI::ExistingFile);
  a->add_option("--order", an.order, "Comma separated attribute order (default canonical)");
  a->add_option("--interactions", an.interactions, "Interaction terms, e.g. TOXICITY:SPAM");
  a->add_option("--format", an.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  a->add_option("--out", an.out, "Table output file (default stdout)");
  a->add_option("--sig-out", an.sig_out, "Significance vector JSON path");

  SimilarityOptions sim;
  auto* m = app.add_subcommand("similarity", "Similarity of two significance vectors");
  m->add_option("--a", sim.a, "First significance JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--b", sim.b, "Second significance JSON")->required()->check(CLI::ExistingFile);
  m->add_option("--out", sim.out, "Optional JSON result file");

  QqOptions qq;
  auto* q = app.add_subcommand("qq", "Normal Q-Q data of the ANOVA residuals");
  q->add_option("--scores", qq.scores, "Score CSV")->required()->check(CLI::ExistingFile);
  q->add_option("--out", qq.out, "CSV of (theoretical, sample) points")->required();
  q->add_option("--order", qq.order, "Comma separated attribute order");
  q->add_option("--interactions", qq.interactions, "Interaction terms");

  ResampleOptions rs;
  auto* r = app.add_subcommand("resample", "Balance a score dataset with SMOTE variants");
  r->add_option("--method", rs.method, "none, smote or borderline_smote")->capture_default_str();
  r->add_option("--k", rs.k, "Minority neighbours for interpolation")->capture_default_str();
  r->add_option("--m", rs.m, "Neighbours for danger detection")->capture_default_str();
  r->add_option("--ratio", rs.ratio, "Target minority/majority ratio")->capture_default_str();
  r->add_option("--seed", rs.seed, "Master seed")->capture_default_str();
  r->add_option("--in", rs.in, "Input score CSV")->required()->check(CLI::ExistingFile);
  r->add_option("--out", rs.out, "Output score CSV")->required();

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Train on one dataset, test on another");
  e->add_option("--train", ev.train, "Training score CSV")->required()->check(CLI::ExistingFile);
  e->add_option("--test", ev.test, "Test score CSV")->required()->check(CLI::ExistingFile);
  e->add_option("--samplers", ev.samplers, "Comma separated samplers")->capture_default_str();
  e->add_option("--classifiers", ev.classifiers, "Comma separated classifiers")
      ->capture_default_str();
  e->add_option("--k", ev.k, "SMOTE k")->capture_default_str();
  e->add_option("--m", ev.m, "Borderline m")->capture_default_str();
  e->add_option("--seed", ev.seed, "Master seed")->capture_default_str();
  e->add_option("--threads", ev.threads, "Grid cells evaluated in parallel")
      ->capture_default_str();
  e->add_option("--out", ev.out, "JSON report file")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& x : args) argv.push_back(x.c_str());
  if (argv.empty()) argv.push_back("pstat");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  Manifest manifest;
  manifest.argv = args;
  try {
    int code = kExitOk;
    fs::path primary;
    if (s->parsed()) {
      manifest.command = "score";
      code = cmd_score(score, manifest, out, err);
      primary = score.output;
    } else if (a->parsed()) {
      manifest.command = "anova";
      code = cmd_anova(an, manifest, out, err);
      primary = an.out.empty() ? manifest.outputs.back() : fs::path(an.out);
    } else if (m->parsed()) {
      manifest.command = "similarity";
      code = cmd_similarity(sim, manifest, out);
      primary = sim.out.empty() ? fs::path(sim.a + ".similarity") : fs::path(sim.out);
    } else if (q->parsed()) {
      manifest.command = "qq";
      code = cmd_qq(qq, manifest, err);
      primary = qq.out;
    } else if (r->parsed()) {
      manifest.command = "resample";
      code = cmd_resample(rs, manifest, out, err);
      primary = rs.out;
    } else if (e->parsed()) {
      manifest.command = "eval";
      code = cmd_eval(ev, manifest, out, err);
      primary = ev.out;
    }
    manifest.write(manifest_path(manifest_override, primary));
    return code;
  } catch (const pstat::Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitError;
  }
}

}  // namespace pstat::cli
