#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gridpos {

using Coord = std::int64_t;

/// An integer vector of Z^d. Points of [n]^d, sum vectors and difference
/// vectors all use this type; the grid constraint lives in PointSet.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> coords) : coords_(std::move(coords)) {}
  LatticePoint(std::initializer_list<Coord> coords) : coords_(coords) {}

  static LatticePoint zero(std::size_t dim) { return LatticePoint(std::vector<Coord>(dim, 0)); }

  std::size_t dim() const noexcept { return coords_.size(); }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  Coord& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Coord> coords() const noexcept { return coords_; }

  // Lexicographic by coordinates.
  auto operator<=>(const LatticePoint&) const = default;
  bool operator==(const LatticePoint&) const = default;

  // Overflow-checked; dimensions must agree.
  LatticePoint& operator+=(const LatticePoint& other);
  LatticePoint& operator-=(const LatticePoint& other);
  LatticePoint scaled(Coord factor) const;

  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }

 private:
  std::vector<Coord> coords_;
};

/// "(1,2,3)"
std::string to_string(const LatticePoint& p);

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

/// A canonically sorted set of distinct points of the grid [n]^d.
class PointSet {
 public:
  PointSet() = default;

  // Sorts the input; rejects duplicates, wrong dimensions and coordinates
  // outside [1, side].
  PointSet(std::size_t dim, Coord side, std::vector<LatticePoint> points);

  static PointSet full_grid(std::size_t dim, Coord side);

  std::size_t dim() const noexcept { return dim_; }
  Coord side() const noexcept { return side_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
  std::span<const LatticePoint> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  bool contains(const LatticePoint& p) const;
  std::optional<std::size_t> index_of(const LatticePoint& p) const;

  // Sub-collection by (any order of) indices into this set.
  PointSet subset(std::span<const std::uint32_t> indices) const;

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t dim_ = 1;
  Coord side_ = 1;
  std::vector<LatticePoint> points_;
};

// Total number of grid points n^d, overflow-checked.
std::uint64_t grid_size(std::size_t dim, Coord side);

// Row-major index of a grid point (coordinates 1-based) and its inverse.
std::uint64_t grid_index(const LatticePoint& p, Coord side);
LatticePoint grid_point(std::uint64_t index, std::size_t dim, Coord side);

}  // namespace gridpos
