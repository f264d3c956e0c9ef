#include "pstat/perspective_client.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "pstat/errors.hpp"
#include "pstat/hashing.hpp"

namespace pstat::perspective {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string_view mode_name(Mode mode) {
  return mode == Mode::kLive ? "live" : "mock";
}

Mode parse_mode(std::string_view name) {
  if (name == "live") return Mode::kLive;
  if (name == "mock") return Mode::kMock;
  throw ConfigError("unknown mode '" + std::string(name) + "'; expected live or mock");
}

void ClientConfig::validate() const {
  if (!(qps_limit > 0.0) || !std::isfinite(qps_limit)) {
    throw ConfigError("qps_limit must be positive");
  }
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (!(backoff_base_seconds >= 0.0)) throw ConfigError("backoff_base must be >= 0");
  if (api_key_env.empty()) throw ConfigError("api key environment variable name is empty");
}

RateLimiter::RateLimiter(double qps, Clock& clock)
    : clock_(clock),
      interval_(std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>(1.0 / qps))) {}

void RateLimiter::acquire() {
  std::lock_guard lock(mu_);
  auto now = clock_.now();
  if (last_) {
    const auto earliest = *last_ + interval_;
    if (now < earliest) {
      clock_.sleep_for(earliest - now);
      now = std::max(clock_.now(), earliest);
    }
  }
  last_ = now;
}

json build_request(std::string_view text) {
  json attrs = json::object();
  for (auto name : kAttributeNames) attrs[std::string(name)] = json::object();
  return {
      {"comment", {{"text", std::string(text)}}},
      {"languages", {"en"}},
      {"requestedAttributes", std::move(attrs)},
      {"doNotStore", true},
  };
}

ParsedResponse parse_response(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("response is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("attributeScores") ||
      !doc["attributeScores"].is_object()) {
    throw ProtocolError("response has no attributeScores object");
  }
  ParsedResponse out;
  out.provenance = json::object();
  const auto& scores = doc["attributeScores"];
  for (std::size_t j = 0; j < kNumAttributes; ++j) {
    const std::string name(kAttributeNames[j]);
    const auto it = scores.find(name);
    if (it == scores.end()) {
      throw ProtocolError("response is missing attribute " + name);
    }
    const auto summary = it->find("summaryScore");
    if (summary == it->end() || !summary->contains("value") ||
        !(*summary)["value"].is_number()) {
      throw ProtocolError("attribute " + name + " has no summaryScore.value");
    }
    const double v = (*summary)["value"].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ProtocolError(fmt::format("attribute {} score {} outside [0,1]", name, v));
    }
    out.scores[j] = v;
    if (summary->contains("type")) {
      out.provenance["summary_types"][name] = (*summary)["type"];
    }
  }
  for (const char* field : {"languages", "detectedLanguages"}) {
    if (doc.contains(field)) out.provenance[field] = doc[field];
  }
  return out;
}

ScoreCache::ScoreCache(fs::path dir) : dir_(std::move(dir)) {}

std::string ScoreCache::key(std::string_view text) {
  std::string material;
  for (auto name : kAttributeNames) {
    material += name;
    material += ',';
  }
  material += '\n';
  material += text;
  return sha256_hex(material);
}

fs::path ScoreCache::path_for(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<ScoreVector> ScoreCache::get(const std::string& key) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const json doc = json::parse(in);
    ScoreVector s{};
    for (std::size_t j = 0; j < kNumAttributes; ++j) {
      s[j] = doc.at("scores").at(std::string(kAttributeNames[j])).get<double>();
    }
    validate_scores(s);
    return s;
  } catch (const std::exception&) {
    // Unreadable entries are treated as misses and overwritten.
    return std::nullopt;
  }
}

void ScoreCache::put(const std::string& key, const ScoreVector& scores,
                     const json& provenance) const {
  fs::create_directories(dir_);
  json doc;
  doc["key"] = key;
  for (std::size_t j = 0; j < kNumAttributes; ++j) {
    doc["scores"][std::string(kAttributeNames[j])] = scores[j];
  }
  doc["provenance"] = provenance;

  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << '.' << std::random_device{}();
  const fs::path final_path = path_for(key);
  const fs::path tmp = final_path.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, final_path);
}

namespace {

std::unique_ptr<Transport> make_transport(const ClientConfig& config) {
  if (config.mode == Mode::kMock) {
    return std::make_unique<MockTransport>(MockScorer(config.mock_triggers));
  }
  return std::make_unique<HttpsTransport>();
}

std::string read_api_key(const ClientConfig& config) {
  if (config.mode != Mode::kLive) return {};
  const char* key = std::getenv(config.api_key_env.c_str());
  if (!key || !*key) {
    throw ConfigError("live mode requires an API key in environment variable " +
                      config.api_key_env);
  }
  return key;
}

bool retryable(int status) { return status == 0 || status == 429 || status >= 500; }

}  // namespace

Client::Client(ClientConfig config)
    : Client(config, make_transport(config), nullptr, read_api_key(config)) {}

Client::Client(ClientConfig config, std::unique_ptr<Transport> transport,
               Clock* clock, std::string api_key)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      clock_(clock ? clock : &steady_),
      api_key_(std::move(api_key)),
      cache_(config_.cache_dir / std::string(mode_name(config_.mode))) {
  config_.validate();
  if (!transport_) throw ConfigError("client needs a transport");
  if (!transport_->is_local()) {
    limiter_ = std::make_unique<RateLimiter>(config_.qps_limit, *clock_);
  }
}

ScoreVector Client::request_with_retries(std::string_view text, json& provenance) {
  std::string path(kAnalyzePath);
  if (!api_key_.empty()) path += "?key=" + api_key_;
  const std::string body = build_request(text).dump();

  HttpResponse last;
  for (int attempt = 0;; ++attempt) {
    if (limiter_) limiter_->acquire();
    ++requests_;
    last = transport_->post(path, body);
    if (last.status == 200) {
      auto parsed = parse_response(last.body);
      provenance = std::move(parsed.provenance);
      return parsed.scores;
    }
    if (!retryable(last.status) || attempt >= config_.max_retries) break;
    const double wait = config_.backoff_base_seconds * std::ldexp(1.0, attempt);
    clock_->sleep_for(std::chrono::duration_cast<Clock::duration>(
        std::chrono::duration<double>(wait)));
  }
  std::string detail = last.body.substr(0, 200);
  throw TransportError(last.status,
                       fmt::format("analyze request failed with status {}: {}",
                                   last.status, detail));
}

ScoreVector Client::analyze(std::string_view text) {
  if (text.empty()) throw ConfigError("cannot score empty text");
  const std::string key = ScoreCache::key(text);
  if (auto hit = cache_.get(key)) return *hit;

  json provenance;
  const ScoreVector scores = request_with_retries(text, provenance);
  provenance["mode"] = mode_name(config_.mode);
  cache_.put(key, scores, provenance);
  return scores;
}

CorpusScores Client::analyze_corpus(std::span<const TextInstance> instances) {
  CorpusScores out;
  for (const auto& inst : instances) {
    try {
      out.scored.emplace_back(inst.id, analyze(inst.text));
    } catch (const TransportError& e) {
      out.failures.push_back({inst.id, e.status(), e.what()});
    } catch (const ProtocolError& e) {
      out.failures.push_back({inst.id, 200, e.what()});
    }
  }
  if (!instances.empty() && out.scored.empty()) {
    throw TransportError(out.failures.empty() ? 0 : out.failures.back().status,
                         fmt::format("no text could be scored ({} failures); last: {}",
                                     out.failures.size(),
                                     out.failures.empty() ? "" : out.failures.back().error));
  }
  return out;
}

}  // namespace pstat::perspective
