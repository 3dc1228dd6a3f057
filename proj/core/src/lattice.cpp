#include "gridpos/lattice.hpp"

#include <algorithm>

#include "gridpos/checked_int.hpp"
#include "gridpos/error.hpp"

namespace gridpos {

namespace {

void require_same_dim(const LatticePoint& a, const LatticePoint& b) {
  if (a.dim() != b.dim()) {
    fail(Errc::DimensionMismatch, "vectors of dimension " + std::to_string(a.dim()) + " and " +
                                      std::to_string(b.dim()));
  }
}

}  // namespace

LatticePoint& LatticePoint::operator+=(const LatticePoint& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_add(coords_[i], other.coords_[i]);
  return *this;
}

LatticePoint& LatticePoint::operator-=(const LatticePoint& other) {
  require_same_dim(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_sub(coords_[i], other.coords_[i]);
  return *this;
}

LatticePoint LatticePoint::scaled(Coord factor) const {
  LatticePoint out = *this;
  for (auto& c : out.coords_) c = checked_mul(c, factor);
  return out;
}

std::string to_string(const LatticePoint& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  out += ')';
  return out;
}

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ p.dim();
  for (Coord c : p.coords()) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

PointSet::PointSet(std::size_t dim, Coord side, std::vector<LatticePoint> points)
    : dim_(dim), side_(side), points_(std::move(points)) {
  if (dim_ == 0) fail(Errc::InvalidConfig, "dimension must be positive");
  if (side_ < 1) fail(Errc::InvalidConfig, "grid side must be positive");
  for (const auto& p : points_) {
    if (p.dim() != dim_) {
      fail(Errc::DimensionMismatch, "point " + to_string(p) + " in a set of dimension " + std::to_string(dim_));
    }
    for (Coord c : p.coords()) {
      if (c < 1 || c > side_) {
        fail(Errc::OutOfRange, "point " + to_string(p) + " outside [1, " + std::to_string(side_) + "]^" +
                                   std::to_string(dim_));
      }
    }
  }
  std::sort(points_.begin(), points_.end());
  auto dup = std::adjacent_find(points_.begin(), points_.end());
  if (dup != points_.end()) fail(Errc::DuplicatePoints, "point " + to_string(*dup) + " repeated");
}

PointSet PointSet::full_grid(std::size_t dim, Coord side) {
  const std::uint64_t total = grid_size(dim, side);
  std::vector<LatticePoint> pts;
  pts.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) pts.push_back(grid_point(i, dim, side));
  return PointSet(dim, side, std::move(pts));
}

bool PointSet::contains(const LatticePoint& p) const { return index_of(p).has_value(); }

std::optional<std::size_t> PointSet::index_of(const LatticePoint& p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it == points_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

PointSet PointSet::subset(std::span<const std::uint32_t> indices) const {
  std::vector<LatticePoint> pts;
  pts.reserve(indices.size());
  for (auto i : indices) pts.push_back(points_.at(i));
  return PointSet(dim_, side_, std::move(pts));
}

std::uint64_t grid_size(std::size_t dim, Coord side) {
  if (side < 1) fail(Errc::InvalidConfig, "grid side must be positive");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total = checked_mul_u64(total, static_cast<std::uint64_t>(side));
  return total;
}

std::uint64_t grid_index(const LatticePoint& p, Coord side) {
  std::uint64_t idx = 0;
  for (Coord c : p.coords()) idx = idx * static_cast<std::uint64_t>(side) + static_cast<std::uint64_t>(c - 1);
  return idx;
}

LatticePoint grid_point(std::uint64_t index, std::size_t dim, Coord side) {
  std::vector<Coord> coords(dim);
  for (std::size_t i = dim; i-- > 0;) {
    coords[i] = static_cast<Coord>(index % static_cast<std::uint64_t>(side)) + 1;
    index /= static_cast<std::uint64_t>(side);
  }
  return LatticePoint(std::move(coords));
}

}  // namespace gridpos
