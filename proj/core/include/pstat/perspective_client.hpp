#ifndef PSTAT_PERSPECTIVE_CLIENT_HPP_
#define PSTAT_PERSPECTIVE_CLIENT_HPP_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pstat/attributes.hpp"
#include "pstat/corpus.hpp"

namespace pstat::perspective {

inline constexpr std::string_view kApiHost = "commentanalyzer.googleapis.com";
inline constexpr std::string_view kAnalyzePath = "/v1alpha1/comments:analyze";

struct HttpResponse {
  int status = 0;  // 0 means the request never produced a response
  std::string body;
};

// The single network boundary. Everything above it (request building,
// response parsing, retries, caching) is shared by the live and mock modes.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& path_and_query,
                            const std::string& json_body) = 0;
  // Local transports are not rate limited.
  virtual bool is_local() const { return false; }
};

class HttpsTransport final : public Transport {
 public:
  explicit HttpsTransport(std::string host = std::string(kApiHost),
                          std::chrono::seconds timeout = std::chrono::seconds(30));
  HttpResponse post(const std::string& path_and_query,
                    const std::string& json_body) override;

 private:
  std::string host_;
  std::chrono::seconds timeout_;
};

class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  using duration = std::chrono::steady_clock::duration;

  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_for(duration d) = 0;
};

class SteadyClock final : public Clock {
 public:
  time_point now() override { return std::chrono::steady_clock::now(); }
  void sleep_for(duration d) override;
};

// Spaces request starts at least 1/qps apart.
class RateLimiter {
 public:
  RateLimiter(double qps, Clock& clock);
  void acquire();

 private:
  Clock& clock_;
  Clock::duration interval_;
  std::optional<Clock::time_point> last_;
  std::mutex mu_;
};

struct MockTrigger {
  std::string substring;  // matched case-insensitively
  std::vector<Attribute> attributes;
};

// Deterministic offline scorer. Each attribute score is a keyed hash of
// (attribute name, text) mapped uniformly onto [0,1); every trigger whose
// substring occurs in the text adds 0.5 to its attributes, clamped to 1.
class MockScorer {
 public:
  MockScorer() : triggers_(default_triggers()) {}
  explicit MockScorer(std::vector<MockTrigger> triggers)
      : triggers_(std::move(triggers)) {}

  ScoreVector score(std::string_view text) const;
  const std::vector<MockTrigger>& triggers() const noexcept { return triggers_; }

  static std::vector<MockTrigger> default_triggers();
  // Base score before triggers are applied.
  static double hashed_score(Attribute attribute, std::string_view text);

 private:
  std::vector<MockTrigger> triggers_;
};

// Answers analyze requests in process using a MockScorer.
class MockTransport final : public Transport {
 public:
  explicit MockTransport(MockScorer scorer = {}) : scorer_(std::move(scorer)) {}
  HttpResponse post(const std::string& path_and_query,
                    const std::string& json_body) override;
  bool is_local() const override { return true; }

 private:
  MockScorer scorer_;
};

enum class Mode { kLive, kMock };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

struct ClientConfig {
  std::string api_key_env = "PERSPECTIVE_API_KEY";
  double qps_limit = 1.0;
  int max_retries = 5;
  double backoff_base_seconds = 2.0;
  std::filesystem::path cache_dir = ".pstat-cache";
  Mode mode = Mode::kLive;
  std::vector<MockTrigger> mock_triggers = MockScorer::default_triggers();

  void validate() const;
};

nlohmann::json build_request(std::string_view text);

struct ParsedResponse {
  ScoreVector scores{};
  nlohmann::json provenance;  // languages and per-attribute summary types
};

// Throws ProtocolError naming the first attribute that is missing or whose
// summary score is not a probability.
ParsedResponse parse_response(std::string_view body);

// On-disk cache, one JSON document per text, named by the hex SHA-256 of
// the requested attribute set and the text. Writes go to a temporary file
// that is renamed into place.
class ScoreCache {
 public:
  explicit ScoreCache(std::filesystem::path dir);

  static std::string key(std::string_view text);
  std::optional<ScoreVector> get(const std::string& key) const;
  void put(const std::string& key, const ScoreVector& scores,
           const nlohmann::json& provenance) const;
  std::filesystem::path path_for(const std::string& key) const;

 private:
  std::filesystem::path dir_;
};

struct ScoringFailure {
  std::string id;
  int status = 0;
  std::string error;
};

struct CorpusScores {
  std::vector<std::pair<std::string, ScoreVector>> scored;
  std::vector<ScoringFailure> failures;
};

class Client {
 public:
  // Builds the transport for config.mode. Live mode reads the key from the
  // configured environment variable and throws ConfigError naming it when
  // unset.
  explicit Client(ClientConfig config);
  // Injection point for tests. A null clock means the steady clock.
  Client(ClientConfig config, std::unique_ptr<Transport> transport,
         Clock* clock = nullptr, std::string api_key = {});

  // Thread safe.
  ScoreVector analyze(std::string_view text);

  // Scores every instance, caching as it goes so a rerun resumes. Per-text
  // failures are collected in the result. Throws TransportError when the
  // corpus is non-empty and nothing could be scored.
  CorpusScores analyze_corpus(std::span<const TextInstance> instances);

  std::size_t requests_sent() const noexcept { return requests_.load(); }
  const ClientConfig& config() const noexcept { return config_; }

 private:
  ScoreVector request_with_retries(std::string_view text, nlohmann::json& provenance);

  ClientConfig config_;
  std::unique_ptr<Transport> transport_;
  SteadyClock steady_;
  Clock* clock_;
  std::string api_key_;
  ScoreCache cache_;
  std::unique_ptr<RateLimiter> limiter_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace pstat::perspective

#endif  // PSTAT_PERSPECTIVE_CLIENT_HPP_
