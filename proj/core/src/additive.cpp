#include "gridpos/additive.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "gridpos/checked_int.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"

namespace gridpos {

namespace {

std::vector<LatticePoint> canonical(std::span<const LatticePoint> pts) {
  std::vector<LatticePoint> out(pts.begin(), pts.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t common_dim(std::span<const LatticePoint> a, std::span<const LatticePoint> b) {
  std::size_t dim = 0;
  bool set = false;
  for (auto span : {a, b}) {
    for (const auto& p : span) {
      if (!set) {
        dim = p.dim();
        set = true;
      } else if (p.dim() != dim) {
        fail(Errc::DimensionMismatch, "vectors of dimension " + std::to_string(dim) + " and " + std::to_string(p.dim()));
      }
    }
  }
  return dim;
}

// Trivial iff the coefficients of each distinct index sum to zero.
bool trivial_by_index(std::span<const std::uint32_t> idx, std::span<const Coord> coeffs) {
  for (std::size_t a = 0; a < idx.size(); ++a) {
    bool first = true;
    for (std::size_t b = 0; b < a && first; ++b) first = idx[b] != idx[a];
    if (!first) continue;
    Coord sum = 0;
    for (std::size_t b = a; b < idx.size(); ++b) {
      if (idx[b] == idx[a]) sum = checked_add(sum, coeffs[b]);
    }
    if (sum != 0) return false;
  }
  return true;
}

// Odometer over all assignments of |V| values to `slots` positions, in
// lexicographic order; f(span of indices).
template <class F>
void for_each_assignment(std::size_t values, std::size_t slots, F&& f) {
  std::vector<std::uint32_t> a(slots, 0);
  if (values == 0 && slots > 0) return;
  for (;;) {
    f(std::span<const std::uint32_t>(a));
    std::size_t i = slots;
    while (i > 0 && a[i - 1] + 1 == values) a[--i] = 0;
    if (i == 0) return;
    ++a[i - 1];
  }
}

std::uint64_t power_saturating(std::uint64_t base, std::size_t e) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base != 0 && out > UINT64_MAX / base) return UINT64_MAX;
    out *= base;
  }
  return out;
}

std::size_t intersection_size(const Subset& a, const Subset& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::vector<LatticePoint> sums_of(const SigmaMap& sigma) {
  std::vector<LatticePoint> out;
  out.reserve(sigma.size());
  for (const auto& [s, subset] : sigma) out.push_back(s);
  return out;
}

LatticePoint lift(const LatticePoint& u, Coord j, const LatticePoint& w) { return u.scaled(j) + w; }

}  // namespace

bool is_trivial_solution(std::span<const LatticePoint> values, std::span<const Coord> coeffs) {
  if (values.size() != coeffs.size()) {
    fail(Errc::LengthMismatch, std::to_string(values.size()) + " values for " + std::to_string(coeffs.size()) +
                                   " coefficients");
  }
  if (values.empty()) return true;
  LatticePoint total = LatticePoint::zero(values.front().dim());
  for (std::size_t i = 0; i < values.size(); ++i) total += values[i].scaled(coeffs[i]);
  if (total != LatticePoint::zero(total.dim())) fail(Errc::NotASolution, "values do not satisfy the equation");
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  Coord group = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    group = checked_add(group, coeffs[order[i]]);
    const bool last = i + 1 == order.size() || values[order[i + 1]] != values[order[i]];
    if (last) {
      if (group != 0) return false;
      group = 0;
    }
  }
  return true;
}

std::optional<std::vector<LatticePoint>> find_nontrivial_solution(const PointSet& V, const EquationSpec& spec,
                                                                  std::uint64_t budget) {
  if (spec.coeffs.empty()) fail(Errc::InvalidConfig, "empty coefficient list");
  if (spec.ambient_dim != V.dim()) fail(Errc::DimensionMismatch, "equation and point set dimensions differ");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    if (spec.coeffs[i] == 0) fail(Errc::InvalidConfig, "zero coefficient");
    (spec.coeffs[i] > 0 ? pos : neg).push_back(i);
  }
  if (V.empty()) return std::nullopt;
  const std::uint64_t left = power_saturating(V.size(), pos.size());
  const std::uint64_t right = power_saturating(V.size(), neg.size());
  require_budget(left == UINT64_MAX || right == UINT64_MAX ? UINT64_MAX : left + right, budget, "meet in the middle");

  const std::size_t dim = V.dim();
  auto side_sum = [&](const std::vector<std::size_t>& slots, std::span<const std::uint32_t> a) {
    LatticePoint s = LatticePoint::zero(dim);
    for (std::size_t t = 0; t < slots.size(); ++t) s += V[a[t]].scaled(spec.coeffs[slots[t]] > 0 ? spec.coeffs[slots[t]] : -spec.coeffs[slots[t]]);
    return s;
  };
  std::unordered_map<LatticePoint, std::vector<std::vector<std::uint32_t>>, LatticePointHash> right_side;
  for_each_assignment(V.size(), neg.size(), [&](std::span<const std::uint32_t> a) {
    right_side[side_sum(neg, a)].emplace_back(a.begin(), a.end());
  });

  std::optional<std::vector<std::uint32_t>> best;
  std::vector<std::uint32_t> full(spec.coeffs.size());
  for_each_assignment(V.size(), pos.size(), [&](std::span<const std::uint32_t> a) {
    auto it = right_side.find(side_sum(pos, a));
    if (it == right_side.end()) return;
    for (std::size_t t = 0; t < pos.size(); ++t) full[pos[t]] = a[t];
    for (const auto& b : it->second) {
      for (std::size_t t = 0; t < neg.size(); ++t) full[neg[t]] = b[t];
      if (trivial_by_index(full, spec.coeffs)) continue;
      if (!best || full < *best) best = full;
    }
  });
  if (!best) return std::nullopt;
  std::vector<LatticePoint> out;
  for (auto i : *best) out.push_back(V[i]);
  ensure(!is_trivial_solution(out, spec.coeffs), "witness is trivial");
  return out;
}

BigInt eq5_coefficient_bound(Coord n, std::size_t d, std::size_t r) {
  if (n < 1 || d == 0 || r == 0) fail(Errc::InvalidConfig, "n, d and r must be positive");
  return iroot_floor(pow(BigInt(n), static_cast<unsigned>(d)), static_cast<unsigned>(2 * r * d + 1));
}

std::vector<Coord> eq5_coeffs(std::size_t r, Coord c1, Coord c2) {
  std::vector<Coord> c;
  for (std::size_t i = 0; i < r; ++i) c.push_back(c1);
  for (std::size_t i = 0; i < r; ++i) c.push_back(-c1);
  for (std::size_t i = 0; i < r; ++i) c.push_back(-c2);
  for (std::size_t i = 0; i < r; ++i) c.push_back(c2);
  return c;
}

Eq5Result verify_eq5(const PointSet& V, std::size_t r, std::uint64_t budget, std::optional<BigInt> bound_override) {
  if (r == 0) fail(Errc::InvalidConfig, "r must be positive");
  Eq5Result out;
  out.bound = bound_override ? *bound_override : eq5_coefficient_bound(V.side(), V.dim(), r);
  if (out.bound < 0 || out.bound > BigInt(1'000'000)) fail(Errc::InvalidConfig, "coefficient bound out of range");
  if (V.size() < 2) return out;
  const auto M = out.bound.convert_to<Coord>();
  const std::uint64_t per_pair = checked_mul_u64(2, power_saturating(V.size(), 2 * r));
  require_budget(per_pair == UINT64_MAX ? UINT64_MAX : checked_mul_u64(per_pair, static_cast<std::uint64_t>(M * M)),
                 budget, "equation (c1, c2) sweep");
  for (Coord c1 = 1; c1 <= M; ++c1) {
    for (Coord c2 = 1; c2 <= M; ++c2) {
      EquationSpec spec{eq5_coeffs(r, c1, c2), V.dim()};
      if (auto sol = find_nontrivial_solution(V, spec, UINT64_MAX)) {
        out.holds = false;
        out.witness = Eq5Witness{c1, c2, std::move(*sol)};
        return out;
      }
    }
  }
  return out;
}

BgResult bg_check(const PointSet& V, std::size_t g, std::size_t m, std::uint64_t budget) {
  if (g == 0 || m == 0) fail(Errc::InvalidConfig, "g and m must be positive");
  const std::uint64_t per = checked_mul_u64(2, power_saturating(V.size(), g));
  const std::uint64_t vectors = power_saturating(m, g);
  require_budget(per == UINT64_MAX || vectors == UINT64_MAX ? UINT64_MAX : checked_mul_u64(per, vectors), budget,
                 "B_g coefficient sweep");
  BgResult out;
  if (V.size() < 2) return out;
  for_each_assignment(m, g, [&](std::span<const std::uint32_t> a) {
    if (!out.holds) return;
    EquationSpec spec;
    spec.ambient_dim = V.dim();
    for (auto c : a) spec.coeffs.push_back(static_cast<Coord>(c) + 1);
    for (auto c : a) spec.coeffs.push_back(-(static_cast<Coord>(c) + 1));
    if (auto sol = find_nontrivial_solution(V, spec, UINT64_MAX)) {
      out.holds = false;
      out.coeffs.assign(spec.coeffs.begin(), spec.coeffs.begin() + static_cast<std::ptrdiff_t>(g));
      out.values = std::move(*sol);
    }
  });
  return out;
}

SumProfile sum_profile(const PointSet& V, std::size_t r, std::uint64_t budget) {
  if (r == 0) fail(Errc::InvalidConfig, "r must be positive");
  SumProfile out;
  out.r = r;
  if (r > V.size()) return out;
  const SumIndex index = build_sum_index(V, r, budget);
  for (const auto& [sum, members] : index.buckets) {
    out.sums.push_back(sum);
    if (members.size() > 1 && !out.collision) out.collision = std::make_pair(members[0], members[1]);
  }
  out.bijective = !out.collision.has_value();
  ensure(out.bijective == (out.sums.size() == binomial_u64(V.size(), r)), "sum profile bookkeeping");
  return out;
}

std::uint64_t PhiTable::at(const LatticePoint& x) const {
  auto it = counts.find(x);
  return it == counts.end() ? 0 : it->second;
}

std::uint64_t PhiTable::total() const {
  std::uint64_t t = 0;
  for (const auto& [x, c] : counts) t += c;
  return t;
}

PhiTable phi(std::span<const LatticePoint> U, std::span<const LatticePoint> T) {
  common_dim(U, T);
  const auto u = canonical(U);
  const auto t = canonical(T);
  PhiTable out;
  for (const auto& a : u) {
    for (const auto& b : t) ++out.counts[a - b];
  }
  return out;
}

CsResult check_cs(std::span<const LatticePoint> U, std::span<const LatticePoint> T) {
  common_dim(U, T);
  const auto u = canonical(U);
  const auto t = canonical(T);
  if (u.empty() || t.empty()) fail(Errc::EmptyInput, "Cauchy-Schwarz check needs non-empty sets");
  std::set<LatticePoint> sumset;
  for (const auto& a : u) {
    for (const auto& b : t) sumset.insert(a + b);
  }
  CsResult out;
  out.sumset_size = sumset.size();
  const BigInt pairs = BigInt(u.size()) * t.size();
  out.lhs = Rational(pairs * pairs, BigInt(out.sumset_size));
  const PhiTable pu = phi(u, u);
  const PhiTable pt = phi(t, t);
  for (const auto& [x, c] : pu.counts) out.rhs += BigInt(c) * pt.at(x);
  out.holds = out.lhs <= Rational(out.rhs);
  return out;
}

Dissection dissect(std::span<const LatticePoint> sums, Coord j) {
  if (j < 1) fail(Errc::InvalidConfig, "j must be positive");
  const auto s = canonical(sums);
  Dissection out;
  out.j = j;
  for (const auto& v : s) {
    LatticePoint w = v;
    LatticePoint u = v;
    for (std::size_t a = 0; a < v.dim(); ++a) {
      w[a] = ((v[a] % j) + j) % j;
      u[a] = (v[a] - w[a]) / j;
    }
    out.parts[w].push_back(u);
  }
  std::size_t total = 0;
  for (const auto& [w, part] : out.parts) total += part.size();
  ensure(total == s.size(), "dissection does not partition the sums");
  return out;
}

SigmaMap sigma_preimages(const PointSet& V, std::size_t r, std::uint64_t budget) {
  SigmaMap out;
  if (r == 0) fail(Errc::InvalidConfig, "r must be positive");
  if (r > V.size()) return out;
  const SumIndex index = build_sum_index(V, r, budget);
  for (const auto& [sum, members] : index.buckets) {
    if (members.size() > 1) {
      fail(Errc::NonBijectiveSigma, "two " + std::to_string(r) + "-subsets share the sum " + to_string(sum));
    }
    out.emplace(sum, members.front());
  }
  return out;
}

PhiTable stratified_phi(const Dissection& dissection, const LatticePoint& w, const SigmaMap& sigma, std::size_t i) {
  PhiTable out;
  auto it = dissection.parts.find(w);
  if (it == dissection.parts.end()) return out;
  const auto& part = it->second;
  std::vector<const Subset*> pre;
  for (const auto& u : part) {
    auto s = sigma.find(lift(u, dissection.j, w));
    if (s == sigma.end()) fail(Errc::InvalidConfig, "dissection part outside the sum set");
    pre.push_back(&s->second);
  }
  for (std::size_t a = 0; a < part.size(); ++a) {
    for (std::size_t b = 0; b < part.size(); ++b) {
      if (intersection_size(*pre[a], *pre[b]) == i) ++out.counts[part[a] - part[b]];
    }
  }
  return out;
}

std::uint64_t stratum0_mass(const SigmaMap& sigma, std::size_t dim, Coord m, const LatticePoint& x) {
  if (x.dim() != dim) fail(Errc::DimensionMismatch, "x has the wrong dimension");
  const auto sums = sums_of(sigma);
  std::uint64_t total = 0;
  for (Coord j = 1; j <= m; ++j) {
    const Dissection dis = dissect(sums, j);
    for (const auto& [w, part] : dis.parts) {
      for (const auto& u1 : part) {
        const LatticePoint u2 = u1 - x;
        if (!std::binary_search(part.begin(), part.end(), u2)) continue;
        const auto& a = sigma.at(lift(u1, j, w));
        const auto& b = sigma.at(lift(u2, j, w));
        if (intersection_size(a, b) == 0) ++total;
      }
    }
  }
  return total;
}

StratifiedMass stratified_mass(const SigmaMap& sigma, std::size_t vertex_count, std::size_t dim, std::size_t r,
                               Coord j, std::size_t i, Coord ell) {
  if (i < 1 || i > r) fail(Errc::InvalidConfig, "stratum index must lie in [1, r]");
  if (ell < 1 || j < 1) fail(Errc::InvalidConfig, "j and ell must be positive");
  const Dissection dis = dissect(sums_of(sigma), j);
  StratifiedMass out;
  // Phi_{T-T}(x) for T = {0..ell-1}^d is a product of (ell - |x_a|).
  const auto box = [&](const LatticePoint& x) -> std::uint64_t {
    std::uint64_t c = 1;
    for (std::size_t a = 0; a < x.dim(); ++a) {
      const Coord ax = x[a] < 0 ? -x[a] : x[a];
      if (ax >= ell) return 0;
      c *= static_cast<std::uint64_t>(ell - ax);
    }
    return c;
  };
  for (const auto& [w, part] : dis.parts) {
    const PhiTable t = stratified_phi(dis, w, sigma, i);
    for (const auto& [x, c] : t.counts) out.lhs += BigInt(c) * box(x);
  }
  out.rhs = pow(BigInt(vertex_count), static_cast<unsigned>(2 * r - i)) * pow(BigInt(ell), static_cast<unsigned>(dim));
  out.holds = out.lhs <= out.rhs;
  return out;
}

MultifoldBound multifold_bound(std::size_t d, std::size_t r) {
  if (d == 0 || r == 0) fail(Errc::InvalidConfig, "d and r must be positive");
  MultifoldBound out;
  out.d = d;
  out.r = r;
  const BigInt q = 2 * BigInt(r) * d + 1;
  out.exponent = Rational(BigInt(d), BigInt(2 * r)) * (1 - Rational(BigInt(1), q));
  out.m_exponent = Rational(BigInt(d), q);
  out.l_exponent = 1 - out.m_exponent;
  return out;
}

FlatBound flat_bound(std::size_t d, std::size_t k) {
  if (k < 2) fail(Errc::InvalidConfig, "the multifold bound needs k >= 2");
  if (d == 0) fail(Errc::InvalidConfig, "d must be positive");
  FlatBound out;
  out.d = d;
  out.k = k;
  out.multifold = multifold_bound(d, (k + 2) / 4);
  out.lefmann_exponent = Rational(BigInt(d), BigInt((k + 2) / 2));
  out.trivial_exponent = Rational(static_cast<long long>(d) - static_cast<long long>(k));
  out.improves = out.multifold.exponent < out.lefmann_exponent;
  return out;
}

}  // namespace gridpos
