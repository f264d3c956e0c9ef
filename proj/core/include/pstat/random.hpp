#ifndef PSTAT_RANDOM_HPP_
#define PSTAT_RANDOM_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>

namespace pstat {

// Source of randomness for the samplers and stochastic learners. Tests
// substitute fixed sequences.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  // Uniform integer in [0, bound); bound >= 1.
  virtual std::size_t index(std::size_t bound) = 0;
  // Uniform double in [0, 1).
  virtual double unit() = 0;
};

// std::mt19937_64 seeded with the 64-bit seed. Stream semantics, so other
// implementations can reproduce outputs:
//   index(k): draw x, redraw while x < (2^64 - k) mod k, return x mod k
//   unit():   draw x, return (x >> 11) * 2^-53
// Each call consumes the draws it makes, in call order.
class Mt64Source final : public RandomSource {
 public:
  explicit Mt64Source(std::uint64_t seed) : engine_(seed) {}

  std::size_t index(std::size_t bound) override;
  double unit() override;
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by index(), from the back.
template <typename It>
void shuffle(It first, It last, RandomSource& rng) {
  auto n = static_cast<std::size_t>(last - first);
  while (n > 1) {
    const std::size_t j = rng.index(n);
    --n;
    std::iter_swap(first + n, first + j);
  }
}

}  // namespace pstat

#endif  // PSTAT_RANDOM_HPP_
