#pragma once

#include <cstdint>


namespace gridpos {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the i-th draw of stream s under seed k is a pure
/// function of (k, s, i), so trials reproduce regardless of scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL))) {}

  std::uint64_t next() noexcept { return splitmix64(key_ ^ splitmix64(counter_++)); }

  // Uniform on [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Exact Bernoulli(num/den) for 0 <= num <= den < 2^64.
inline bool bernoulli(CounterRng& rng, std::uint64_t num, std::uint64_t den) noexcept {
  return rng.below(den) < num;
}

}  // namespace gridpos
