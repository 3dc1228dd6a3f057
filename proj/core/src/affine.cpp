#include "gridpos/affine.hpp"

#include <algorithm>
#include <numeric>

#include "gridpos/checked_int.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"
#include "gridpos/rational.hpp"

namespace gridpos {

namespace {

void validate(std::span<const LatticePoint* const> points) {
  if (points.empty()) fail(Errc::EmptyInput, "affine rank of an empty point set");
  const std::size_t dim = points.front()->dim();
  for (const auto* p : points) {
    if (p->dim() != dim) {
      fail(Errc::DimensionMismatch, "points of dimension " + std::to_string(dim) + " and " + std::to_string(p->dim()));
    }
  }
}

// Bareiss elimination on rows x cols stored row-major in `a`; returns rank.
std::size_t bareiss_rank(std::vector<std::int64_t>& a, std::size_t rows, std::size_t cols) {
  std::int64_t prev = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + col] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = col; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    }
    const std::int64_t p = a[rank * cols + col];
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const std::int64_t lead = a[i * cols + col];
      for (std::size_t j = col + 1; j < cols; ++j) {
        const __int128 num = static_cast<__int128>(p) * a[i * cols + j] -
                             static_cast<__int128>(lead) * a[rank * cols + j];
        // Exact by Sylvester's identity.
        a[i * cols + j] = narrow_i128(num / prev);
      }
      a[i * cols + col] = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

}  // namespace

std::size_t affine_rank(std::span<const LatticePoint* const> points) {
  validate(points);
  const std::size_t rows = points.size() - 1;
  const std::size_t cols = points.front()->dim();
  if (rows == 0 || cols == 0) return 0;
  thread_local std::vector<std::int64_t> scratch;
  scratch.resize(rows * cols);
  const LatticePoint& anchor = *points.front();
  for (std::size_t i = 0; i < rows; ++i) {
    const LatticePoint& p = *points[i + 1];
    for (std::size_t j = 0; j < cols; ++j) scratch[i * cols + j] = checked_sub(p[j], anchor[j]);
  }
  return bareiss_rank(scratch, rows, cols);
}

std::size_t affine_rank(std::span<const LatticePoint> points) {
  std::vector<const LatticePoint*> refs;
  refs.reserve(points.size());
  for (const auto& p : points) refs.push_back(&p);
  return affine_rank(std::span<const LatticePoint* const>(refs));
}

bool lies_on_flat(std::span<const LatticePoint> points, std::size_t k) { return affine_rank(points) <= k; }

std::string_view to_string(TupleKind kind) noexcept {
  switch (kind) {
    case TupleKind::OffFlat: return "OffFlat";
    case TupleKind::Degenerate: return "Degenerate";
    case TupleKind::NonDegenerate: return "NonDegenerate";
  }
  return "Unknown";
}

TupleKind classify_kind(std::span<const LatticePoint* const> tuple, std::size_t k) {
  if (affine_rank(tuple) > k) return TupleKind::OffFlat;
  // A j-subset on a (j-2)-flat extends to a (k+1)-subset on a (k-1)-flat,
  // so checking the k+2 subsets of size k+1 suffices. For k = 1 the size
  // range 3..k+1 is empty.
  if (k < 2) return TupleKind::NonDegenerate;
  const std::size_t m = tuple.size();
  const LatticePoint* rest[64];
  std::vector<const LatticePoint*> heap;
  const LatticePoint** buf = rest;
  if (m - 1 > 64) {
    heap.resize(m - 1);
    buf = heap.data();
  }
  for (std::size_t drop = 0; drop < m; ++drop) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i != drop) buf[w++] = tuple[i];
    }
    if (affine_rank(std::span<const LatticePoint* const>(buf, m - 1)) + 1 <= k) return TupleKind::Degenerate;
  }
  return TupleKind::NonDegenerate;
}

TupleClass classify_tuple(std::span<const LatticePoint> tuple, std::size_t k) {
  if (tuple.size() != k + 2) {
    fail(Errc::WrongArity, "expected " + std::to_string(k + 2) + " points, got " + std::to_string(tuple.size()));
  }
  std::vector<LatticePoint> sorted(tuple.begin(), tuple.end());
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    fail(Errc::DuplicatePoints, "point " + to_string(*dup) + " repeated");
  }
  std::vector<const LatticePoint*> refs;
  for (const auto& p : sorted) refs.push_back(&p);

  TupleClass out;
  out.kind = classify_kind(refs, k);
  if (out.kind != TupleKind::Degenerate) return out;

  std::vector<const LatticePoint*> sub;
  for (std::size_t j = 3; j <= k + 1; ++j) {
    bool found = false;
    for_each_combination(static_cast<std::uint32_t>(sorted.size()), static_cast<std::uint32_t>(j),
                         [&](std::span<const std::uint32_t> idx) {
                           if (found) return;
                           sub.clear();
                           for (auto i : idx) sub.push_back(refs[i]);
                           if (affine_rank(sub) + 2 <= j) {
                             found = true;
                             for (const auto* p : sub) out.witness.push_back(*p);
                           }
                         });
    if (found) return out;
  }
  ensure(false, "degenerate tuple without a witness subset");
  return out;
}

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

}  // namespace

FlatEquations flat_through(std::span<const LatticePoint* const> points) {
  validate(points);
  const std::size_t dim = points.front()->dim();
  const LatticePoint& anchor = *points.front();

  // Reduced row echelon form of the direction vectors.
  std::vector<std::vector<Rational>> m;
  for (std::size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> row(dim);
    for (std::size_t j = 0; j < dim; ++j) row[j] = Rational((*points[i])[j]) - Rational(anchor[j]);
    m.push_back(std::move(row));
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < m.size(); ++col) {
    std::size_t p = rank;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    const Rational lead = m[rank][col];
    for (auto& v : m[rank]) v /= lead;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t j = 0; j < dim; ++j) m[i][j] -= f * m[rank][j];
    }
    pivot_cols.push_back(col);
    ++rank;
  }

  FlatEquations out;
  out.flat_dim = rank;
  // The null space of the direction matrix is the space of normals; take its
  // standard basis (one vector per free column f, v_f = 1).
  for (std::size_t f = 0; f < dim; ++f) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), f) != pivot_cols.end()) continue;
    std::vector<Rational> v(dim, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < rank; ++i) v[pivot_cols[i]] = -m[i][f];
    BigInt den = 1;
    for (const auto& x : v) den = lcm_big(den, denominator_of(x));
    std::vector<BigInt> ints(dim);
    BigInt g = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      ints[j] = numerator_of(v[j]) * (den / denominator_of(v[j]));
      g = boost::multiprecision::gcd(g, ints[j]);
    }
    std::vector<Coord> normal(dim);
    __int128 offset = 0;
    for (std::size_t j = 0; j < dim; ++j) {
      BigInt q = ints[j] / g;
      if (q > INT64_MAX || q < INT64_MIN) fail(Errc::ArithmeticOverflow, "flat normal coefficient");
      normal[j] = static_cast<Coord>(q);
      offset += static_cast<__int128>(normal[j]) * anchor[j];
    }
    out.normals.push_back(std::move(normal));
    out.offsets.push_back(narrow_i128(offset));
  }
  return out;
}

FlatEquations flat_through(std::span<const LatticePoint> points) {
  std::vector<const LatticePoint*> refs;
  for (const auto& p : points) refs.push_back(&p);
  return flat_through(std::span<const LatticePoint* const>(refs));
}

bool FlatEquations::contains(const LatticePoint& p) const {
  for (std::size_t i = 0; i < normals.size(); ++i) {
    __int128 dot = 0;
    for (std::size_t j = 0; j < normals[i].size(); ++j) dot += static_cast<__int128>(normals[i][j]) * p[j];
    if (dot != offsets[i]) return false;
  }
  return true;
}

}  // namespace gridpos
