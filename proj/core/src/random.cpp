#include "pstat/random.hpp"

#include "pstat/errors.hpp"

namespace pstat {

std::size_t Mt64Source::index(std::size_t bound) {
  if (bound == 0) throw DomainError("index bound must be positive");
  const std::uint64_t k = bound;
  const std::uint64_t threshold = (0 - k) % k;
  std::uint64_t x = engine_();
  while (x < threshold) x = engine_();
  return static_cast<std::size_t>(x % k);
}

double Mt64Source::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

}  // namespace pstat
