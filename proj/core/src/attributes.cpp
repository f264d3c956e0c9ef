#include "pstat/attributes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pstat/errors.hpp"

namespace pstat {

std::optional<std::size_t> attribute_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumAttributes; ++i) {
    if (kAttributeNames[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t require_attribute(std::string_view name) {
  if (auto idx = attribute_index(name)) return *idx;
  throw ConfigError("unknown attribute '" + std::string(name) +
                    "'; valid names: " + attribute_name_list());
}

std::string attribute_name_list() {
  std::string out;
  for (std::size_t i = 0; i < kNumAttributes; ++i) {
    if (i) out += ", ";
    out += kAttributeNames[i];
  }
  return out;
}

void validate_scores(const ScoreVector& scores) {
  for (std::size_t i = 0; i < kNumAttributes; ++i) {
    const double v = scores[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw RangeError(
          fmt::format("{} score {} outside [0,1]", kAttributeNames[i], v));
    }
  }
}

}  // namespace pstat
