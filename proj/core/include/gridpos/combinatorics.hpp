#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridpos/rational.hpp"

namespace gridpos {

// C(n, k) in 64 bits; throws ArithmeticOverflow when it does not fit.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k);
BigInt binomial(std::uint64_t n, std::uint64_t k);

// Same as binomial_u64 but saturates at UINT64_MAX; for budget checks.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

// The combination of rank `rank` among the k-subsets of {0..n-1} in
// lexicographic order.
std::vector<std::uint32_t> unrank_combination(std::uint32_t n, std::uint32_t k, std::uint64_t rank);

// Advances to the lexicographic successor; false after the last one.
bool next_combination(std::span<std::uint32_t> comb, std::uint32_t n);

// Calls f(span<const uint32_t>) for every k-subset of {0..n-1} with
// lexicographic rank in [first, last).
template <class F>
void for_each_combination(std::uint32_t n, std::uint32_t k, std::uint64_t first, std::uint64_t last, F&& f) {
  if (first >= last) return;
  auto comb = unrank_combination(n, k, first);
  for (std::uint64_t r = first; r < last; ++r) {
    f(std::span<const std::uint32_t>(comb));
    if (!next_combination(comb, n)) break;
  }
}

template <class F>
void for_each_combination(std::uint32_t n, std::uint32_t k, F&& f) {
  if (k > n) return;
  std::vector<std::uint32_t> comb(k);
  for (std::uint32_t i = 0; i < k; ++i) comb[i] = i;
  do {
    f(std::span<const std::uint32_t>(comb));
  } while (next_combination(comb, n));
}

// Throws BudgetExceeded when `work` exceeds `budget`.
void require_budget(std::uint64_t work, std::uint64_t budget, const char* what);

}  // namespace gridpos
