#include "gridpos/census.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "gridpos/affine.hpp"
#include "gridpos/checked_int.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"
#include "gridpos/parallel.hpp"

namespace gridpos {

namespace {

constexpr std::size_t kMaxArity = 64;

void require_even_k(std::size_t k) {
  if (k == 0 || k % 2 != 0) fail(Errc::OddKInPairMode, "pair-based machinery needs an even positive k, got " + std::to_string(k));
}

// Pair classification on references; `u` receives the union.
PairClass classify_pair_refs(std::span<const LatticePoint* const> t1, std::span<const LatticePoint* const> t2,
                             std::size_t k) {
  const LatticePoint* buf[2 * kMaxArity];
  std::size_t n = 0;
  bool disjoint = true;
  for (const auto* p : t1) buf[n++] = p;
  for (const auto* p : t2) {
    bool shared = false;
    for (const auto* q : t1) shared = shared || *q == *p;
    if (shared) {
      disjoint = false;
    } else {
      buf[n++] = p;
    }
  }
  std::span<const LatticePoint* const> united(buf, n);
  if (disjoint && classify_kind(united, k) == TupleKind::NonDegenerate) return PairClass::Good;
  // A bad equal-sum pair always spans at most a (k-1)-flat.
  ensure(affine_rank(united) + 1 <= k, "bad pair union not on a (k-1)-flat");
  return PairClass::Bad;
}

LatticePoint sum_of(std::span<const LatticePoint* const> pts) {
  LatticePoint s = LatticePoint::zero(pts.front()->dim());
  for (const auto* p : pts) s += *p;
  return s;
}

}  // namespace

std::uint64_t SumIndex::subset_count() const {
  std::uint64_t total = 0;
  for (const auto& [sum, members] : buckets) total += members.size();
  return total;
}

SumIndex build_sum_index(const PointSet& V, std::size_t r, std::uint64_t budget) {
  if (r == 0 || r > V.size()) {
    fail(Errc::ArityTooLarge, "r = " + std::to_string(r) + " with |V| = " + std::to_string(V.size()));
  }
  require_budget(binomial_saturating(V.size(), r), budget, "sum index");
  SumIndex index;
  index.r = r;
  std::vector<const LatticePoint*> refs(r);
  for_each_combination(static_cast<std::uint32_t>(V.size()), static_cast<std::uint32_t>(r),
                       [&](std::span<const std::uint32_t> comb) {
                         for (std::size_t i = 0; i < r; ++i) refs[i] = &V[comb[i]];
                         index.buckets[sum_of(refs)].emplace_back(comb.begin(), comb.end());
                       });
  ensure(index.subset_count() == binomial_u64(V.size(), r), "sum index does not partition the r-subsets");
  return index;
}

std::uint64_t count_colliding_pairs(const SumIndex& index) {
  std::uint64_t pairs = 0;
  for (const auto& [sum, members] : index.buckets) {
    const std::uint64_t b = members.size();
    pairs = checked_add_u64(pairs, b * (b - 1) / 2);
  }
  return pairs;
}

JensenCheck check_jensen(const SumIndex& index) {
  JensenCheck out;
  out.colliding_pairs = count_colliding_pairs(index);
  out.subsets = index.subset_count();
  out.nonempty_buckets = index.buckets.size();
  if (out.nonempty_buckets == 0) return out;
  const BigInt lhs = BigInt(2) * out.nonempty_buckets * out.colliding_pairs;
  const BigInt rhs = BigInt(out.subsets) * (BigInt(out.subsets) - out.nonempty_buckets);
  out.holds = lhs >= rhs;
  return out;
}

PairClass classify_pair(std::span<const LatticePoint> t1, std::span<const LatticePoint> t2, std::size_t k) {
  require_even_k(k);
  const std::size_t r = k / 2 + 1;
  if (t1.size() != r || t2.size() != r) {
    fail(Errc::WrongArity, "pair halves must have " + std::to_string(r) + " points");
  }
  if (r > kMaxArity) fail(Errc::ArityTooLarge, "pair halves too large");
  std::vector<LatticePoint> s1(t1.begin(), t1.end());
  std::vector<LatticePoint> s2(t2.begin(), t2.end());
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  if (std::adjacent_find(s1.begin(), s1.end()) != s1.end() || std::adjacent_find(s2.begin(), s2.end()) != s2.end()) {
    fail(Errc::DuplicatePoints, "pair halves must be sets");
  }
  if (s1 == s2) fail(Errc::InvalidConfig, "pair halves are the same subset");
  std::vector<const LatticePoint*> r1, r2;
  for (const auto& p : s1) r1.push_back(&p);
  for (const auto& p : s2) r2.push_back(&p);
  if (r1.front()->dim() != r2.front()->dim()) fail(Errc::DimensionMismatch, "pair halves of different dimension");
  if (sum_of(r1) != sum_of(r2)) fail(Errc::SumMismatch, "pair halves have different sums");
  return classify_pair_refs(r1, r2, k);
}

TupleList nondegenerate_tuples(const PointSet& V, std::size_t k, const CensusOptions& options) {
  const std::size_t m = k + 2;
  TupleList out(m);
  if (V.size() < m) return out;
  if (m > kMaxArity) fail(Errc::ArityTooLarge, "tuple size above " + std::to_string(kMaxArity));
  const std::uint64_t total = binomial_saturating(V.size(), m);
  require_budget(total, options.budget, "exhaustive census");
  const auto n = static_cast<std::uint32_t>(V.size());
  auto partials = run_chunked<TupleList>(options.threads, total, [&](std::uint64_t first, std::uint64_t last) {
    TupleList local(m);
    const LatticePoint* refs[kMaxArity];
    for_each_combination(n, static_cast<std::uint32_t>(m), first, last, [&](std::span<const std::uint32_t> comb) {
      for (std::size_t i = 0; i < m; ++i) refs[i] = &V[comb[i]];
      if (classify_kind(std::span<const LatticePoint* const>(refs, m), k) == TupleKind::NonDegenerate) {
        local.push_back(comb);
      }
    });
    return local;
  });
  for (const auto& part : partials) out.append(part);
  return out;
}

std::uint64_t count_nondegenerate(const PointSet& V, std::size_t k, const CensusOptions& options) {
  const std::size_t m = k + 2;
  if (V.size() < m) return 0;
  if (m > kMaxArity) fail(Errc::ArityTooLarge, "tuple size above " + std::to_string(kMaxArity));
  const std::uint64_t total = binomial_saturating(V.size(), m);
  require_budget(total, options.budget, "exhaustive census");
  const auto n = static_cast<std::uint32_t>(V.size());
  auto partials = run_chunked<std::uint64_t>(options.threads, total, [&](std::uint64_t first, std::uint64_t last) {
    std::uint64_t count = 0;
    const LatticePoint* refs[kMaxArity];
    for_each_combination(n, static_cast<std::uint32_t>(m), first, last, [&](std::span<const std::uint32_t> comb) {
      for (std::size_t i = 0; i < m; ++i) refs[i] = &V[comb[i]];
      if (classify_kind(std::span<const LatticePoint* const>(refs, m), k) == TupleKind::NonDegenerate) ++count;
    });
    return count;
  });
  std::uint64_t total_count = 0;
  for (auto c : partials) total_count += c;
  return total_count;
}

CensusReport census(const PointSet& V, std::size_t k, const CensusOptions& options) {
  if (k == 0) fail(Errc::InvalidConfig, "k must be positive");
  CensusReport report;
  report.dim = V.dim();
  report.side = V.side();
  report.k = k;
  report.vertex_count = V.size();
  const bool pair_pass = options.mode != CensusMode::Exhaustive;
  const bool exhaustive_pass = options.mode != CensusMode::PairBased;

  if (pair_pass) {
    require_even_k(k);
    const std::size_t r = k / 2 + 1;
    report.r = r;
    if (V.size() < k + 2) {
      report.colliding_pairs = report.good_pairs = report.bad_pairs = report.pairwise_lower_bound = 0;
      report.nonempty_buckets = 0;
      report.jensen_holds = true;
    } else {
      const SumIndex index = build_sum_index(V, r, options.budget);
      const JensenCheck jensen = check_jensen(index);
      require_budget(jensen.colliding_pairs, options.budget, "pair classification");

      // Buckets are independent; classify them in parallel, merge in order.
      std::vector<const std::vector<Subset>*> buckets;
      for (const auto& [sum, members] : index.buckets) {
        if (members.size() > 1) buckets.push_back(&members);
      }
      struct Partial {
        std::uint64_t good = 0;
        std::uint64_t bad = 0;
        std::vector<Subset> unions;
      };
      auto partials = run_chunked<Partial>(options.threads, buckets.size(), [&](std::uint64_t first, std::uint64_t last) {
        Partial part;
        const LatticePoint* a[kMaxArity];
        const LatticePoint* b[kMaxArity];
        for (std::uint64_t bi = first; bi < last; ++bi) {
          const auto& members = *buckets[bi];
          for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
              for (std::size_t t = 0; t < r; ++t) {
                a[t] = &V[members[i][t]];
                b[t] = &V[members[j][t]];
              }
              if (classify_pair_refs({a, r}, {b, r}, k) == PairClass::Good) {
                ++part.good;
                Subset u;
                u.reserve(2 * r);
                std::merge(members[i].begin(), members[i].end(), members[j].begin(), members[j].end(),
                           std::back_inserter(u));
                part.unions.push_back(std::move(u));
              } else {
                ++part.bad;
              }
            }
          }
        }
        return part;
      });
      std::set<Subset> distinct;
      std::uint64_t good = 0;
      std::uint64_t bad = 0;
      for (auto& part : partials) {
        good += part.good;
        bad += part.bad;
        distinct.insert(std::make_move_iterator(part.unions.begin()), std::make_move_iterator(part.unions.end()));
      }
      ensure(good + bad == jensen.colliding_pairs, "good + bad != colliding pairs");
      report.colliding_pairs = jensen.colliding_pairs;
      report.good_pairs = good;
      report.bad_pairs = bad;
      report.pairwise_lower_bound = distinct.size();
      report.nonempty_buckets = jensen.nonempty_buckets;
      report.jensen_holds = jensen.holds;
    }
  }

  if (exhaustive_pass) report.nondegenerate_tuples = count_nondegenerate(V, k, options);

  if (pair_pass && exhaustive_pass) {
    ensure(*report.pairwise_lower_bound <= *report.nondegenerate_tuples,
           "pair-based lower bound exceeds the exhaustive count");
  }
  return report;
}

DegreeProfile degree_profile_from_edges(const TupleList& edges, std::size_t vertex_count, std::size_t k) {
  const std::size_t m = k + 2;
  if (edges.size() > 0 && edges.arity() != m) fail(Errc::WrongArity, "edge arity does not match k + 2");
  DegreeProfile profile;
  profile.k = k;
  profile.edges = edges.size();
  profile.delta.assign(m + 1, 0);
  if (edges.size() == 0) return profile;
  profile.delta[m] = 1;

  // Pack an l-subset of indices into one word when |V|^l fits.
  const auto packs = [&](std::size_t ell) {
    unsigned __int128 cap = 1;
    for (std::size_t i = 0; i < ell; ++i) {
      cap *= vertex_count;
      if (cap > UINT64_MAX) return false;
    }
    return true;
  };

  std::uint32_t sub[kMaxArity];
  for (std::size_t ell = 2; ell < m; ++ell) {
    std::uint64_t best = 0;
    if (packs(ell)) {
      std::unordered_map<std::uint64_t, std::uint64_t> counts;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto edge = edges[e];
        for_each_combination(static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(ell),
                             [&](std::span<const std::uint32_t> pick) {
                               std::uint64_t key = 0;
                               for (auto i : pick) key = key * vertex_count + edge[i];
                               best = std::max(best, ++counts[key]);
                             });
      }
    } else {
      std::map<Subset, std::uint64_t> counts;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto edge = edges[e];
        for_each_combination(static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(ell),
                             [&](std::span<const std::uint32_t> pick) {
                               for (std::size_t i = 0; i < ell; ++i) sub[i] = edge[pick[i]];
                               best = std::max(best, ++counts[Subset(sub, sub + ell)]);
                             });
      }
    }
    profile.delta[ell] = best;
  }
  for (std::size_t ell = 3; ell <= m; ++ell) {
    ensure(profile.delta[ell] <= profile.delta[ell - 1], "degree profile increases with l");
  }
  return profile;
}

DegreeProfile degree_profile(const PointSet& V, std::size_t k, const CensusOptions& options) {
  if (k == 0) fail(Errc::InvalidConfig, "k must be positive");
  const TupleList edges = nondegenerate_tuples(V, k, options);
  DegreeProfile profile = degree_profile_from_edges(edges, V.size(), k);
  for (const auto& b : degree_bounds(profile, V.size(), V.side())) {
    ensure(b.holds, "maximum degree bound violated");
  }
  return profile;
}

std::vector<DegreeBound> degree_bounds(const DegreeProfile& profile, std::uint64_t vertex_count, Coord side) {
  std::vector<DegreeBound> out;
  const std::size_t k = profile.k;
  const BigInt n_to_k = pow(BigInt(side), static_cast<unsigned>(k));
  for (std::size_t ell = 2; ell < k + 2; ++ell) {
    DegreeBound b;
    b.ell = ell;
    b.delta = profile.at(ell);
    b.bound = pow(BigInt(vertex_count), static_cast<unsigned>(k + 1 - ell)) * n_to_k;
    b.holds = BigInt(b.delta) <= b.bound;
    out.push_back(std::move(b));
  }
  return out;
}

Rational compute_delta(const DegreeProfile& profile, std::uint64_t num_vertices, std::uint64_t num_edges,
                       const Rational& tau) {
  if (num_edges == 0) fail(Errc::ZeroEdges, "the container functional needs at least one edge");
  if (tau <= 0 || tau > Rational(1, 2)) fail(Errc::TauOutOfRange, "tau = " + to_string(tau) + " outside (0, 1/2]");
  const std::size_t k = profile.k;
  const auto c2 = [](std::size_t x) -> unsigned { return static_cast<unsigned>(x * (x - 1) / 2); };
  const Rational prefactor = Rational(pow(BigInt(2), c2(k + 2) - 1) * num_vertices, BigInt(k + 2) * num_edges);
  Rational sum = 0;
  for (std::size_t ell = 2; ell <= k + 2; ++ell) {
    const std::uint64_t d = profile.at(ell);
    if (d == 0) continue;
    sum += Rational(d) / (pow(tau, static_cast<unsigned>(ell - 1)) * Rational(pow(BigInt(2), c2(ell - 1))));
  }
  return prefactor * sum;
}

ContainerParams container_params(const DegreeProfile& profile, std::uint64_t vertex_count, Coord side,
                                 const Rational& tau, const Rational& epsilon) {
  if (epsilon <= 0 || epsilon >= Rational(1, 2)) {
    fail(Errc::InvalidConfig, "epsilon = " + to_string(epsilon) + " outside (0, 1/2)");
  }
  ContainerParams out;
  out.vertex_count = vertex_count;
  out.side = side;
  out.tau = tau;
  out.epsilon = epsilon;
  out.delta_h_tau = compute_delta(profile, vertex_count, profile.edges, tau);
  BigInt factorial = 1;
  for (std::size_t i = 2; i <= profile.k + 2; ++i) factorial *= i;
  out.threshold = epsilon / Rational(BigInt(12) * factorial);
  out.ratio = out.delta_h_tau / out.threshold;
  return out;
}

std::optional<double> loglog_slope(std::span<const TrendRow> rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows) {
    if (row.count > 0 && row.n > 0) {
      pts.emplace_back(std::log(static_cast<double>(row.n)), std::log(static_cast<double>(row.count)));
    }
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

TrendTable supersaturation_trend(std::size_t k, std::size_t dim, std::span<const Coord> sides,
                                 const CensusOptions& options) {
  if (k == 0 || k % 2 != 0) fail(Errc::InvalidConfig, "the supersaturation trend needs an even positive k");
  TrendTable table;
  table.k = k;
  table.dim = dim;
  table.reference_exponent = (k + 1) * dim;
  for (Coord n : sides) {
    const PointSet grid = PointSet::full_grid(dim, n);
    table.rows.push_back({n, count_nondegenerate(grid, k, options)});
  }
  table.slope = loglog_slope(table.rows);
  return table;
}

}  // namespace gridpos
