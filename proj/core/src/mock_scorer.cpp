#include <algorithm>
#include <cctype>
#include <string>

#include "pstat/errors.hpp"
#include "pstat/hashing.hpp"
#include "pstat/perspective_client.hpp"

namespace pstat::perspective {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::vector<MockTrigger> MockScorer::default_triggers() {
  using A = Attribute;
  return {
      {"damn", {A::kToxicity, A::kProfanity, A::kObscene}},
      {"idiot", {A::kToxicity, A::kInsult}},
      {"kill", {A::kThreat, A::kSevereToxicity}},
      {"hate", {A::kToxicity, A::kIdentityAttack}},
      {"buy now", {A::kSpam}},
  };
}

double MockScorer::hashed_score(Attribute attribute, std::string_view text) {
  std::string keyed(attribute_name(attribute));
  keyed += '\0';
  keyed += text;
  const std::uint64_t h = digest_prefix_u64(sha256(keyed));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

ScoreVector MockScorer::score(std::string_view text) const {
  ScoreVector s{};
  for (std::size_t j = 0; j < kNumAttributes; ++j) {
    s[j] = hashed_score(static_cast<Attribute>(j), text);
  }
  const std::string lower = lowercase(text);
  for (const auto& t : triggers_) {
    if (t.substring.empty() || lower.find(lowercase(t.substring)) == std::string::npos) {
      continue;
    }
    for (Attribute a : t.attributes) {
      auto& v = s[static_cast<std::size_t>(a)];
      v = std::min(1.0, v + 0.5);
    }
  }
  return s;
}

HttpResponse MockTransport::post(const std::string& /*path_and_query*/,
                                 const std::string& json_body) {
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(json_body);
  } catch (const nlohmann::json::exception& e) {
    return {400, nlohmann::json{{"error", {{"message", e.what()}}}}.dump()};
  }
  const auto* text = request.contains("comment")
                         ? &request["comment"]["text"]
                         : nullptr;
  if (!text || !text->is_string()) {
    return {400, R"({"error":{"message":"comment.text required"}})"};
  }
  const ScoreVector scores = scorer_.score(text->get<std::string>());
  nlohmann::json response;
  auto& attr = response["attributeScores"];
  for (const auto& [name, _] : request["requestedAttributes"].items()) {
    const auto idx = attribute_index(name);
    if (!idx) continue;
    attr[name]["summaryScore"] = {{"value", scores[*idx]}, {"type", "PROBABILITY"}};
  }
  response["languages"] = {"en"};
  return {200, response.dump()};
}

}  // namespace pstat::perspective
