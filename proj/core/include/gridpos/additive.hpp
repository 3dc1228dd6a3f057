#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gridpos/census.hpp"
#include "gridpos/lattice.hpp"
#include "gridpos/rational.hpp"

namespace gridpos {

/// c_1 x_1 + ... + c_g x_g = 0 over Z^d.
struct EquationSpec {
  std::vector<Coord> coeffs;
  std::size_t ambient_dim = 1;
};

/// After grouping equal values, does every group's coefficient sum vanish?
/// Throws LengthMismatch, NotASolution.
bool is_trivial_solution(std::span<const LatticePoint> values, std::span<const Coord> coeffs);

/// A non-trivial solution with all values in V, the lexicographically
/// smallest value tuple if several exist. Meet in the middle: the
/// positive-coefficient positions form one side, the rest the other.
std::optional<std::vector<LatticePoint>> find_nontrivial_solution(const PointSet& V, const EquationSpec& spec,
                                                                  std::uint64_t budget = kDefaultBudget);

struct Eq5Witness {
  Coord c1 = 0;
  Coord c2 = 0;
  std::vector<LatticePoint> values;  // x_1..x_{4r}
};

struct Eq5Result {
  bool holds = true;
  BigInt bound;  // M: coefficients range over [1, M]
  std::optional<Eq5Witness> witness;
};

// floor(n^{d/(2rd+1)}) exactly.
BigInt eq5_coefficient_bound(Coord n, std::size_t d, std::size_t r);

// Coefficients of c1((x_1+..+x_r) - (x_{r+1}+..+x_{2r})) - c2((x_{2r+1}+..) - (..+x_{4r})).
std::vector<Coord> eq5_coeffs(std::size_t r, Coord c1, Coord c2);

/// Checks that V has only trivial solutions for every (c1, c2) in [1, M]^2,
/// M = floor(n^{d/(2rd+1)}) with n = side of V unless `bound_override` is
/// given. The first witness in (c1, c2, values) order is returned.
Eq5Result verify_eq5(const PointSet& V, std::size_t r, std::uint64_t budget = kDefaultBudget,
                     std::optional<BigInt> bound_override = std::nullopt);

struct BgResult {
  bool holds = true;
  std::vector<Coord> coeffs;         // c in [m]^g of the witness
  std::vector<LatticePoint> values;  // x_1..x_g, x'_1..x'_g
};

/// m-fold B_g test: only trivial solutions of sum c_i x_i = sum c_i x'_i
/// for every c in [m]^g.
BgResult bg_check(const PointSet& V, std::size_t g, std::size_t m, std::uint64_t budget = kDefaultBudget);

struct SumProfile {
  std::size_t r = 0;
  std::vector<LatticePoint> sums;  // S_r, sorted
  bool bijective = true;           // |S_r| = C(|V|, r)
  // First equal-sum pair by sum order, as index subsets.
  std::optional<std::pair<Subset, Subset>> collision;
};

SumProfile sum_profile(const PointSet& V, std::size_t r, std::uint64_t budget = kDefaultBudget);

/// Phi_{U-T}(x) = #{(u, t) : u - t = x}; zero entries are not stored.
struct PhiTable {
  std::map<LatticePoint, std::uint64_t> counts;

  std::uint64_t at(const LatticePoint& x) const;
  std::uint64_t total() const;
};

// Inputs are treated as sets: sorted and deduplicated. DimensionMismatch.
PhiTable phi(std::span<const LatticePoint> U, std::span<const LatticePoint> T);

struct CsResult {
  Rational lhs;  // (|U||T|)^2 / |U+T|
  BigInt rhs;    // sum_x Phi_{U-U}(x) Phi_{T-T}(x)
  std::uint64_t sumset_size = 0;
  bool holds = true;
};

CsResult check_cs(std::span<const LatticePoint> U, std::span<const LatticePoint> T);

/// U_{j,w} = {u : j u + w in S_r} for residues w in [0, j)^d.
struct Dissection {
  Coord j = 1;
  std::map<LatticePoint, std::vector<LatticePoint>> parts;
};

Dissection dissect(std::span<const LatticePoint> sums, Coord j);

// sigma^{-1}: each r-subset sum to its unique r-subset. NonBijectiveSigma.
using SigmaMap = std::map<LatticePoint, Subset>;
SigmaMap sigma_preimages(const PointSet& V, std::size_t r, std::uint64_t budget = kDefaultBudget);

/// Phi^i on part w of the dissection: ordered pairs (u1, u2) whose
/// preimages sigma^{-1}(j u + w) share exactly i points.
PhiTable stratified_phi(const Dissection& dissection, const LatticePoint& w, const SigmaMap& sigma, std::size_t i);

// sum over j in [m] and w of |Phi^0_{U_{j,w} - U_{j,w}}(x)|.
std::uint64_t stratum0_mass(const SigmaMap& sigma, std::size_t dim, Coord m, const LatticePoint& x);

struct StratifiedMass {
  BigInt lhs;  // sum_w sum_x |Phi^i(x)| |Phi_{T-T}(x)|, T = {0..ell-1}^d
  BigInt rhs;  // |V|^{2r-i} |T|
  bool holds = true;
};

StratifiedMass stratified_mass(const SigmaMap& sigma, std::size_t vertex_count, std::size_t dim, std::size_t r,
                               Coord j, std::size_t i, Coord ell);

/// Exponent bookkeeping for the multifold bound and the resulting bound
/// on a(d,k,n).
struct MultifoldBound {
  std::size_t d = 0;
  std::size_t r = 0;
  Rational exponent;    // (d/(2r)) (1 - 1/(2rd+1))
  Rational m_exponent;  // d/(2rd+1)
  Rational l_exponent;  // 1 - d/(2rd+1)
};

MultifoldBound multifold_bound(std::size_t d, std::size_t r);

struct FlatBound {
  std::size_t d = 0;
  std::size_t k = 0;
  MultifoldBound multifold;   // r = floor((k+2)/4)
  Rational lefmann_exponent;  // d / floor((k+2)/2)
  Rational trivial_exponent;  // d - k
  bool improves = false;      // multifold exponent below Lefmann's
};

// Requires k >= 2 so that r >= 1.
FlatBound flat_bound(std::size_t d, std::size_t k);

}  // namespace gridpos
