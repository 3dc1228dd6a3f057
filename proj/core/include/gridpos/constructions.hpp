#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridpos/census.hpp"
#include "gridpos/lattice.hpp"
#include "gridpos/rational.hpp"

namespace gridpos {

bool is_prime(std::uint64_t p);

/// {(t, t^2 mod p, ..., t^d mod p) + (1, ..., 1) : t in Z_p}, p points of
/// [p]^d with no d+1 on a hyperplane. Throws NotPrime.
PointSet moment_curve(std::size_t d, std::uint64_t p);

/// Number of `size`-subsets of [n]^d with affine rank <= r. Lines are
/// enumerated directly for r = 1; other cases enumerate every subset and
/// are checked against the budget.
BigInt count_flat_tuples(Coord n, std::size_t d, std::size_t r, std::size_t size,
                         std::uint64_t budget = kDefaultBudget);

enum class C6Mode { Exact, Estimate };

struct DeletionConfig {
  std::size_t d = 2;
  std::size_t r = 1;
  std::size_t s = 3;
  Coord n = 20;
  std::optional<Rational> p;  // nullopt: derive p from the formula
  C6Mode c6_mode = C6Mode::Exact;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

// Throws InvalidConfig or ProbabilityOutOfRange.
void validate(const DeletionConfig& cfg);

struct DeletionReport {
  std::uint64_t trial = 0;
  PointSet output;
  std::uint64_t sampled_size = 0;
  std::uint64_t violations_found = 0;  // (r+s)-subsets of the sample on an r-flat
  std::uint64_t deleted = 0;
  std::uint64_t final_size = 0;
};

struct DeletionSummary {
  Rational p;
  bool p_auto = false;
  Coord c6_side = 0;       // side at which the flat tuples were counted
  BigInt flat_tuples;      // count_flat_tuples(c6_side, d, r, r+s)
  Rational c6;             // flat_tuples / c6_side^{(r+1)d+(s-1)r}
  Rational expected_size_bound;  // p n^d - c6 p^{r+s} n^{(r+1)d+(s-1)r}
  Rational half_expected;        // p n^d / 2
  Rational mean_sampled, var_sampled;
  Rational mean_final, var_final;  // sample variance, 0 for one trial
  std::vector<std::string> warnings;
  std::vector<DeletionReport> reports;
};

// (flat_tuples, side used) for the configured c6 mode.
std::pair<BigInt, Coord> c6_count(const DeletionConfig& cfg);

/// p = (2 c6)^{-1/(r+s-1)} n^{-r(d+s-1)/(r+s-1)}, rounded down to a
/// multiple of 2^-32 and clamped to 1/2 with a warning.
Rational auto_probability(const DeletionConfig& cfg, const Rational& c6, std::vector<std::string>& warnings);

/// Samples each point of [n]^d with probability p, deletes points from the
/// sample until no r+s of them lie on an r-flat (greedy hitting set over
/// the violating tuples in lexicographic order) and re-verifies the output.
DeletionSummary deletion_construct(const DeletionConfig& cfg);
DeletionReport deletion_trial(const DeletionConfig& cfg, const Rational& p, std::uint64_t trial);

/// mean >= target - z * sqrt(var / trials), decided exactly.
bool within_standard_errors(const Rational& mean, const Rational& var, std::uint64_t trials, const Rational& target,
                            unsigned z);

}  // namespace gridpos
