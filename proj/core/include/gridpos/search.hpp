#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gridpos/census.hpp"
#include "gridpos/lattice.hpp"
#include "gridpos/rational.hpp"

namespace gridpos {

/// Largest subset of [n]^d with no r points on a k-flat.
struct SearchConfig {
  std::size_t d = 2;
  std::size_t k = 1;
  std::size_t r = 3;
  Coord n = 3;
  std::uint64_t node_budget = kDefaultBudget;
  bool use_symmetry = true;
  // 0 keeps the plain index order for tie-breaks; other values hash it.
  std::uint64_t seed = 0;
};

// Throws InvalidConfig or VacuousConstraint.
void validate(const SearchConfig& cfg);

struct SearchResult {
  PointSet best_set;
  bool optimal = false;  // the tree was exhausted within the node budget
  std::uint64_t nodes = 0;
  std::uint64_t symmetry_group_order = 1;  // stabilizer size used at the root
  double elapsed_ms = 0;
};

/// Branch and bound for a(d,k,r,n). Running out of nodes is not an error:
/// the best set found so far comes back with optimal = false.
SearchResult max_grid_set(const SearchConfig& cfg);

/// Largest subset of V with no d+1 points on a hyperplane.
SearchResult max_general_position_subset(const PointSet& V, std::uint64_t node_budget = kDefaultBudget,
                                         bool use_symmetry = true, std::uint64_t seed = 0);

/// The lexicographically first `size`-subset of S with affine rank <= k, if
/// any. Checks C(|S|, size) subsets against the budget.
std::optional<std::vector<LatticePoint>> find_flat_tuple(const PointSet& S, std::size_t k, std::size_t size,
                                                         std::uint64_t budget = kDefaultBudget);
bool is_flat_free(const PointSet& S, std::size_t k, std::size_t size, std::uint64_t budget = kDefaultBudget);

enum class GreedyOrder { Lexicographic, Shuffled };

struct GreedyResult {
  PointSet subset;
  std::size_t s = 0;
  std::uint64_t input_size = 0;
  BigInt lhs;  // s * C(|subset|, d) + |subset|
  bool holds = true;
};

/// Greedy maximal general-position subset of V. V must have no d+s points
/// on a hyperplane (HypothesisViolated otherwise). Each hyperplane spanned
/// by the subset covers few further points of V, which gives the recorded
/// certificate s * C(|V'|, d) + |V'| >= |V|.
GreedyResult greedy_general_position(const PointSet& V, std::size_t s, GreedyOrder order = GreedyOrder::Lexicographic,
                                     std::uint64_t seed = 0, std::uint64_t budget = kDefaultBudget);

}  // namespace gridpos
