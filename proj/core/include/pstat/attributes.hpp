#ifndef PSTAT_ATTRIBUTES_HPP_
#define PSTAT_ATTRIBUTES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace pstat {

inline constexpr std::size_t kNumAttributes = 9;

// Canonical order. Sequential ANOVA is order dependent, so every table,
// dataset file and feature matrix uses exactly this column order.
enum class Attribute : std::size_t {
  kToxicity = 0,
  kSevereToxicity,
  kIdentityAttack,
  kInsult,
  kProfanity,
  kThreat,
  kSexuallyExplicit,
  kObscene,
  kSpam,
};

inline constexpr std::array<std::string_view, kNumAttributes> kAttributeNames = {
    "TOXICITY",  "SEVERE_TOXICITY",   "IDENTITY_ATTACK",
    "INSULT",    "PROFANITY",         "THREAT",
    "SEXUALLY_EXPLICIT", "OBSCENE",   "SPAM",
};

constexpr std::string_view attribute_name(Attribute a) {
  return kAttributeNames[static_cast<std::size_t>(a)];
}

std::optional<std::size_t> attribute_index(std::string_view name);

// Same as attribute_index but throws ConfigError listing the valid names.
std::size_t require_attribute(std::string_view name);

// Comma separated list of the canonical names, for error messages.
std::string attribute_name_list();

// The nine per-attribute probabilities for one text, canonical order.
using ScoreVector = std::array<double, kNumAttributes>;

// Throws RangeError when any component is outside [0,1] or not finite.
void validate_scores(const ScoreVector& scores);

}  // namespace pstat

#endif  // PSTAT_ATTRIBUTES_HPP_
