#pragma once

// Independent reference implementations. They share no code with the
// library beyond the value types and are deliberately naive.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridpos/lattice.hpp"
#include "gridpos/rational.hpp"

namespace oracle {

using gridpos::BigInt;
using gridpos::Coord;
using gridpos::LatticePoint;
using gridpos::Rational;

// Affine rank by Gaussian elimination over the rationals.
std::size_t rational_rank(std::span<const LatticePoint> pts);

// Affine rank as the largest non-vanishing minor of the difference matrix,
// determinants by cofactor expansion.
std::size_t minors_rank(std::span<const LatticePoint> pts);

enum class Kind { OffFlat, Degenerate, NonDegenerate };

// Straight from the definition: on a k-flat, and some j-subset with
// 3 <= j <= k+1 on a (j-2)-flat.
Kind classify(std::span<const LatticePoint> tuple, std::size_t k);

// Number of non-degenerate (k+2)-subsets of `pts` on a k-flat.
std::uint64_t census(std::span<const LatticePoint> pts, std::size_t k);

// All points of [n]^d in lexicographic order.
std::vector<LatticePoint> grid(std::size_t d, Coord n);

// Delta_l for l = 2..k+2 (index l), over explicit l-subsets.
std::vector<std::uint64_t> degree_profile(std::span<const LatticePoint> pts, std::size_t k);

// The container functional evaluated term by term in a different order.
Rational delta_functional(std::span<const std::uint64_t> delta, std::size_t k, std::uint64_t vertices,
                          std::uint64_t edges, const Rational& tau);

// Largest subset of `pts` with no r points on a k-flat, by trying every subset.
std::size_t max_flat_free(std::span<const LatticePoint> pts, std::size_t k, std::size_t r);

bool flat_free(std::span<const LatticePoint> pts, std::size_t k, std::size_t r);

// Collinear size-subsets of [n]^2 counted through point pairs.
BigInt collinear_tuples_2d(Coord n, std::size_t size);

// Triviality by searching all partitions of the positions.
bool trivial_by_partitions(std::span<const LatticePoint> values, std::span<const Coord> coeffs);

// First non-trivial solution in lexicographic order, by full enumeration.
std::optional<std::vector<LatticePoint>> first_nontrivial(std::span<const LatticePoint> V,
                                                          std::span<const Coord> coeffs);

// Equation family check with coefficients in [1, M].
bool eq5_holds(std::span<const LatticePoint> V, std::size_t r, Coord M);

// sum_x Phi_{U-U}(x) Phi_{T-T}(x) by counting quadruples u1-u2 = t1-t2.
BigInt energy(std::span<const LatticePoint> U, std::span<const LatticePoint> T);

// |U + T| by brute force.
std::size_t sumset_size(std::span<const LatticePoint> U, std::span<const LatticePoint> T);

}  // namespace oracle
