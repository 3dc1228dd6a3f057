#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridpos {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Desk-scale invariant checks across all modules; seeded, deterministic.
std::vector<SelftestResult> run_selftest(std::uint64_t seed = 0);

}  // namespace gridpos
