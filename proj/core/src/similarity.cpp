#include "pstat/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pstat/errors.hpp"

namespace pstat {

namespace {

void check_values(const anova::SignificanceVector& s, const char* which) {
  if (s.terms.size() != s.values.size()) {
    throw AlignmentError(fmt::format("vector {} has {} terms but {} values", which,
                                     s.terms.size(), s.values.size()));
  }
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double x = s.values[i];
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError(fmt::format("vector {} value for {} must be positive, got {}", which,
                                    s.terms[i], x));
    }
  }
}

}  // namespace

double similarity(const anova::SignificanceVector& u, const anova::SignificanceVector& v) {
  check_values(u, "U");
  check_values(v, "V");
  if (u.values.empty()) throw AlignmentError("significance vectors are empty");
  if (u.values.size() != v.values.size()) {
    throw AlignmentError(fmt::format("significance vectors differ in length ({} vs {})",
                                     u.values.size(), v.values.size()));
  }
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    if (u.terms[i] != v.terms[i]) {
      throw AlignmentError(fmt::format("term {} differs: '{}' vs '{}'", i, u.terms[i],
                                       v.terms[i]));
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double a = u.values[i];
    const double b = v.values[i];
    total += std::min(a, b) / std::max(a, b);
  }
  return total / static_cast<double>(u.values.size());
}

}  // namespace pstat
