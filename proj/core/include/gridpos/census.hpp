#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gridpos/lattice.hpp"
#include "gridpos/rational.hpp"

namespace gridpos {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

// Sorted indices into a PointSet.
using Subset = std::vector<std::uint32_t>;

// Fixed-arity index tuples stored contiguously.
class TupleList {
 public:
  explicit TupleList(std::size_t arity = 0) : arity_(arity) {}

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return arity_ == 0 ? 0 : flat_.size() / arity_; }
  std::span<const std::uint32_t> operator[](std::size_t i) const { return {flat_.data() + i * arity_, arity_}; }

  void push_back(std::span<const std::uint32_t> tuple) { flat_.insert(flat_.end(), tuple.begin(), tuple.end()); }
  void append(const TupleList& other) { flat_.insert(flat_.end(), other.flat_.begin(), other.flat_.end()); }

 private:
  std::size_t arity_;
  std::vector<std::uint32_t> flat_;
};

// r-subsets of V bucketed by coordinate-wise sum; buckets iterate in
// lexicographic order of the sum vector.
struct SumIndex {
  std::size_t r = 0;
  std::map<LatticePoint, std::vector<Subset>> buckets;

  std::uint64_t subset_count() const;
};

SumIndex build_sum_index(const PointSet& V, std::size_t r, std::uint64_t budget = kDefaultBudget);

// Sum over buckets of C(|bucket|, 2): unordered pairs of distinct r-subsets
// with equal sums.
std::uint64_t count_colliding_pairs(const SumIndex& index);

// Convexity bound sum_v C(b_v, 2) >= B * C(S/B, 2), B = non-empty buckets,
// S = total subsets, checked in integers as 2B * pairs >= S (S - B).
struct JensenCheck {
  std::uint64_t colliding_pairs = 0;
  std::uint64_t subsets = 0;
  std::uint64_t nonempty_buckets = 0;
  bool holds = true;
};
JensenCheck check_jensen(const SumIndex& index);

enum class PairClass { Good, Bad };

// Good iff the two equal-sum r-subsets (r = k/2 + 1) are disjoint and their
// union is a non-degenerate (k+2)-tuple. Every Bad union is checked to lie
// on a (k-1)-flat.
PairClass classify_pair(std::span<const LatticePoint> t1, std::span<const LatticePoint> t2, std::size_t k);

enum class CensusMode { PairBased, Exhaustive, Combined };

struct CensusOptions {
  CensusMode mode = CensusMode::Exhaustive;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
};

struct CensusReport {
  std::size_t dim = 0;
  Coord side = 0;
  std::size_t k = 0;
  std::size_t r = 0;  // pair split size k/2 + 1; 0 when no pair pass ran
  std::size_t vertex_count = 0;
  std::optional<std::uint64_t> colliding_pairs;
  std::optional<std::uint64_t> good_pairs;
  std::optional<std::uint64_t> bad_pairs;
  std::optional<std::uint64_t> pairwise_lower_bound;
  std::optional<std::uint64_t> nonempty_buckets;
  std::optional<bool> jensen_holds;
  std::optional<std::uint64_t> nondegenerate_tuples;
};

/// Counts non-degenerate (k+2)-subsets of V lying on a k-flat.
///
/// Exhaustive enumerates every (k+2)-subset; PairBased collects the distinct
/// unions of good equal-sum pairs, a lower bound on the exhaustive count
/// (only tuples that split into two disjoint equal-sum halves are found).
/// Combined runs both and checks the lower bound.
CensusReport census(const PointSet& V, std::size_t k, const CensusOptions& options = {});

// Every non-degenerate flat-incident (k+2)-subset, lexicographic order.
TupleList nondegenerate_tuples(const PointSet& V, std::size_t k, const CensusOptions& options = {});
std::uint64_t count_nondegenerate(const PointSet& V, std::size_t k, const CensusOptions& options = {});

// delta[l] = max over l-subsets U of the number of edges containing U, for
// l = 2..k+2 (entries 0 and 1 unused).
struct DegreeProfile {
  std::size_t k = 0;
  std::uint64_t edges = 0;
  std::vector<std::uint64_t> delta;

  std::uint64_t at(std::size_t ell) const { return delta.at(ell); }
};

DegreeProfile degree_profile(const PointSet& V, std::size_t k, const CensusOptions& options = {});
DegreeProfile degree_profile_from_edges(const TupleList& edges, std::size_t vertex_count, std::size_t k);

// Delta_l <= n^{(k+1-l)(d-gamma)+k} with n^{d-gamma} = |V|, i.e. exactly
// Delta_l <= |V|^{k+1-l} n^k, for every l < k+2.
struct DegreeBound {
  std::size_t ell = 0;
  std::uint64_t delta = 0;
  BigInt bound;
  bool holds = true;
};
std::vector<DegreeBound> degree_bounds(const DegreeProfile& profile, std::uint64_t vertex_count, Coord side);

/// The container functional
///   2^{C(k+2,2)-1} |V| / ((k+2) |E|) * sum_{l=2}^{k+2} Delta_l / (tau^{l-1} 2^{C(l-1,2)})
/// in exact arithmetic. Requires |E| >= 1 and 0 < tau <= 1/2.
Rational compute_delta(const DegreeProfile& profile, std::uint64_t num_vertices, std::uint64_t num_edges,
                       const Rational& tau);

// gamma is kept as the pair (vertex_count, side): |V| = side^{d - gamma}.
struct ContainerParams {
  std::uint64_t vertex_count = 0;
  Coord side = 0;
  Rational tau;
  Rational epsilon;
  Rational delta_h_tau;
  Rational threshold;  // epsilon / (12 (k+2)!)
  Rational ratio;      // delta_h_tau / threshold; reported, not asserted
};

ContainerParams container_params(const DegreeProfile& profile, std::uint64_t vertex_count, Coord side,
                                 const Rational& tau, const Rational& epsilon);

struct TrendRow {
  Coord n = 0;
  std::uint64_t count = 0;
};

struct TrendTable {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<TrendRow> rows;
  std::optional<double> slope;  // least squares of log count on log n
  std::size_t reference_exponent = 0;  // (k+1) d
};

TrendTable supersaturation_trend(std::size_t k, std::size_t dim, std::span<const Coord> sides,
                                 const CensusOptions& options = {});

std::optional<double> loglog_slope(std::span<const TrendRow> rows);

}  // namespace gridpos
