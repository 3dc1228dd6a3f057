#include "gridpos/selftest.hpp"

#include <algorithm>
#include <functional>

#include "gridpos/additive.hpp"
#include "gridpos/affine.hpp"
#include "gridpos/census.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/constructions.hpp"
#include "gridpos/error.hpp"
#include "gridpos/random.hpp"
#include "gridpos/search.hpp"

namespace gridpos {

namespace {

std::vector<LatticePoint> random_points(CounterRng& rng, std::size_t count, std::size_t dim, Coord side) {
  std::vector<LatticePoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Coord> c(dim);
    for (auto& x : c) x = 1 + static_cast<Coord>(rng.below(static_cast<std::uint64_t>(side)));
    out.emplace_back(std::move(c));
  }
  return out;
}

std::string rank_invariance(std::uint64_t seed) {
  CounterRng rng(seed, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t dim = 1 + rng.below(4);
    auto pts = random_points(rng, 1 + rng.below(6), dim, 5);
    const std::size_t rank = affine_rank(pts);
    if (rank > pts.size() - 1 || rank > dim) return "rank exceeds |T|-1 or d";
    LatticePoint shift = random_points(rng, 1, dim, 9).front();
    auto moved = pts;
    for (auto& p : moved) p += shift;
    std::reverse(moved.begin(), moved.end());
    if (affine_rank(moved) != rank) return "not translation/permutation invariant";
    if (pts.size() > 1 && affine_rank(std::span(pts).first(pts.size() - 1)) > rank) return "not monotone";
  }
  return {};
}

std::string degeneracy_reduction(std::uint64_t seed) {
  CounterRng rng(seed, 2);
  for (std::size_t k : {2, 4}) {
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t dim = 2 + rng.below(3);
      auto pts = random_points(rng, k + 2, dim, 3);
      std::sort(pts.begin(), pts.end());
      if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) continue;
      const TupleClass cls = classify_tuple(pts, k);
      if (cls.kind == TupleKind::OffFlat) continue;
      bool full = false;
      for (std::size_t j = 3; j <= k + 1 && !full; ++j) {
        for_each_combination(static_cast<std::uint32_t>(pts.size()), static_cast<std::uint32_t>(j),
                             [&](std::span<const std::uint32_t> pick) {
                               std::vector<LatticePoint> sub;
                               for (auto i : pick) sub.push_back(pts[i]);
                               if (affine_rank(sub) + 2 <= j) full = true;
                             });
      }
      if (full != (cls.kind == TupleKind::Degenerate)) return "reduction disagrees with the definition";
    }
  }
  return {};
}

std::string census_consistency(std::uint64_t) {
  CensusOptions opt;
  opt.mode = CensusMode::Combined;
  for (Coord n : {2, 3}) {
    const auto grid = PointSet::full_grid(2, n);
    const CensusReport rep = census(grid, 2, opt);
    if (*rep.colliding_pairs != *rep.good_pairs + *rep.bad_pairs) return "good + bad != colliding";
    if (!*rep.jensen_holds) return "Jensen bound failed";
    const SumIndex idx = build_sum_index(grid, 2);
    if (idx.subset_count() != binomial_u64(grid.size(), 2)) return "sum index is not a partition";
  }
  if (count_nondegenerate(PointSet::full_grid(2, 3), 1) != 8) return "collinear triples in [3]^2 != 8";
  return {};
}

std::string degree_bounds_hold(std::uint64_t) {
  for (Coord n : {2, 3}) {
    const auto grid = PointSet::full_grid(2, n);
    const DegreeProfile prof = degree_profile(grid, 2);
    if (prof.edges > 0 && prof.at(4) != 1) return "Delta_{k+2} != 1";
    for (const auto& b : degree_bounds(prof, grid.size(), n)) {
      if (!b.holds) return "Delta_l above |V|^{k+1-l} n^k";
    }
  }
  DegreeProfile p;
  p.k = 2;
  p.edges = 1;
  p.delta = {0, 0, 0, 0, 1};
  if (compute_delta(p, 16, 1, Rational(1, 2)) != 128) return "compute_delta example != 128";
  return {};
}

std::string search_values(std::uint64_t seed) {
  for (Coord n : {2, 3}) {
    SearchConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    const SearchResult res = max_grid_set(cfg);
    if (!res.optimal || res.best_set.size() != static_cast<std::size_t>(2 * n)) return "a(2,1,3,n) != 2n";
  }
  const auto g = greedy_general_position(PointSet::full_grid(2, 2), 2);
  if (g.subset.size() != 4 || !g.holds) return "greedy on [2]^2";
  return {};
}

std::string moment_curves(std::uint64_t) {
  for (std::size_t d : {2, 3}) {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
      if (!is_flat_free(moment_curve(d, p), d - 1, d + 1)) return "moment curve has d+1 points on a hyperplane";
    }
  }
  return {};
}

std::string deletion(std::uint64_t seed) {
  DeletionConfig cfg;
  cfg.n = 8;
  cfg.s = 2;
  cfg.p = Rational(1, 4);
  cfg.trials = 5;
  cfg.seed = seed;
  const DeletionSummary a = deletion_construct(cfg);
  const DeletionSummary b = deletion_construct(cfg);
  for (std::size_t t = 0; t < a.reports.size(); ++t) {
    if (a.reports[t].output != b.reports[t].output) return "not reproducible";
    if (!is_flat_free(a.reports[t].output, 1, 3)) return "output has 3 collinear points";
  }
  return {};
}

std::string additive_checks(std::uint64_t seed) {
  CounterRng rng(seed, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng.below(2);
    const auto U = random_points(rng, 1 + rng.below(10), dim, 8);
    const auto T = random_points(rng, 1 + rng.below(10), dim, 8);
    if (!check_cs(U, T).holds) return "Cauchy-Schwarz lemma violated";
    const PhiTable self = phi(U, U);
    for (const auto& [x, c] : self.counts) {
      if (self.at(x.scaled(-1)) != c) return "Phi_{U-U} not symmetric";
    }
  }
  const PointSet sidon(1, 11, {LatticePoint{1}, LatticePoint{2}, LatticePoint{5}, LatticePoint{11}});
  if (!bg_check(sidon, 2, 1).holds) return "{1,2,5,11} not B_2";
  if (multifold_bound(4, 1).exponent != Rational(16, 9)) return "multifold exponent for d=4, r=1 != 16/9";
  return {};
}

}  // namespace

std::vector<SelftestResult> run_selftest(std::uint64_t seed) {
  const std::vector<std::pair<std::string, std::function<std::string(std::uint64_t)>>> checks = {
      {"affine-rank-invariance", rank_invariance},
      {"degeneracy-reduction", degeneracy_reduction},
      {"census-consistency", census_consistency},
      {"degree-bounds", degree_bounds_hold},
      {"search-values", search_values},
      {"moment-curve", moment_curves},
      {"deletion", deletion},
      {"additive", additive_checks},
  };
  std::vector<SelftestResult> out;
  for (const auto& [name, check] : checks) {
    SelftestResult res;
    res.name = name;
    try {
      res.detail = check(seed);
      res.passed = res.detail.empty();
    } catch (const std::exception& e) {
      res.detail = e.what();
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace gridpos
