#include "gridpos/combinatorics.hpp"

#include <limits>
#include <string>

#include "gridpos/error.hpp"

namespace gridpos {

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      fail(Errc::ArithmeticOverflow, "binomial(" + std::to_string(n) + ", " + std::to_string(k) + ")");
    }
  }
  return static_cast<std::uint64_t>(result);
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  try {
    return binomial_u64(n, k);
  } catch (const Error&) {
    return std::numeric_limits<std::uint64_t>::max();
  }
}

std::vector<std::uint32_t> unrank_combination(std::uint32_t n, std::uint32_t k, std::uint64_t rank) {
  std::vector<std::uint32_t> comb;
  comb.reserve(k);
  std::uint32_t next = 0;
  for (std::uint32_t slot = 0; slot < k; ++slot) {
    for (std::uint32_t v = next; v < n; ++v) {
      // Number of combinations whose `slot`-th element is v.
      const std::uint64_t block = binomial_u64(n - v - 1, k - slot - 1);
      if (rank < block) {
        comb.push_back(v);
        next = v + 1;
        break;
      }
      rank -= block;
    }
  }
  if (comb.size() != k) fail(Errc::OutOfRange, "combination rank out of range");
  return comb;
}

bool next_combination(std::span<std::uint32_t> comb, std::uint32_t n) {
  const std::size_t k = comb.size();
  if (k == 0) return false;
  std::size_t i = k;
  while (i-- > 0) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void require_budget(std::uint64_t work, std::uint64_t budget, const char* what) {
  if (work > budget) {
    fail(Errc::BudgetExceeded, std::string(what) + " needs " + std::to_string(work) + " units, budget is " +
                                   std::to_string(budget));
  }
}

}  // namespace gridpos
