#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gridpos/lattice.hpp"

namespace gridpos {

/// Dimension of the affine hull of `points`, computed exactly by
/// fraction-free (Bareiss) elimination on the difference vectors anchored at
/// the first point. A single point has rank 0.
///
/// Throws EmptyInput, DimensionMismatch, or ArithmeticOverflow when an
/// intermediate minor leaves the signed 64-bit range.
std::size_t affine_rank(std::span<const LatticePoint> points);
std::size_t affine_rank(std::span<const LatticePoint* const> points);

/// True iff the points lie on a common k-flat.
bool lies_on_flat(std::span<const LatticePoint> points, std::size_t k);

enum class TupleKind { OffFlat, Degenerate, NonDegenerate };

std::string_view to_string(TupleKind kind) noexcept;

struct TupleClass {
  TupleKind kind = TupleKind::OffFlat;
  // For Degenerate: a smallest subset S, 3 <= |S| <= k+1, with
  // rank(S) <= |S| - 2, first in lexicographic order. Empty otherwise.
  std::vector<LatticePoint> witness;
};

/// Classifies a (k+2)-set: OffFlat if it spans more than a k-flat,
/// Degenerate if some (k+1)-subset has rank <= k-1, NonDegenerate otherwise.
/// Throws WrongArity unless |tuple| = k+2, DuplicatePoints on repeats.
TupleClass classify_tuple(std::span<const LatticePoint> tuple, std::size_t k);

// Hot-path variant for enumerations: no validation, no witness.
TupleKind classify_kind(std::span<const LatticePoint* const> tuple, std::size_t k);

// Integer equations normal . x = offset cutting out the affine hull of a
// point set. The representation is canonical (derived from the reduced row
// echelon form of the direction space, rows scaled to primitive integer
// vectors), so equal flats compare equal.
struct FlatEquations {
  std::size_t flat_dim = 0;
  std::vector<std::vector<Coord>> normals;
  std::vector<Coord> offsets;

  bool contains(const LatticePoint& p) const;

  auto operator<=>(const FlatEquations&) const = default;
  bool operator==(const FlatEquations&) const = default;
};

FlatEquations flat_through(std::span<const LatticePoint* const> points);
FlatEquations flat_through(std::span<const LatticePoint> points);

}  // namespace gridpos
