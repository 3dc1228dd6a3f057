#include <gtest/gtest.h>

#include "generators.hpp"
#include "gridpos/affine.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"
#include "gridpos/search.hpp"
#include "oracles.hpp"

using namespace gridpos;

namespace {

SearchConfig config(std::size_t d, std::size_t k, std::size_t r, Coord n) {
  SearchConfig c;
  c.d = d;
  c.k = k;
  c.r = r;
  c.n = n;
  return c;
}

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no gridpos::Error thrown";
  return Errc::InvariantViolation;
}

BigInt covering_bound(const SearchConfig& c) {
  return BigInt(c.r - 1) * gridpos::pow(BigInt(c.n), static_cast<unsigned>(c.d - c.k));
}

// Most points of V on one line (d = 2).
std::size_t max_on_line(const PointSet& V) {
  std::size_t best = std::min<std::size_t>(V.size(), 2);
  for (std::size_t a = 0; a < V.size(); ++a) {
    for (std::size_t b = a + 1; b < V.size(); ++b) {
      std::size_t on = 0;
      for (const auto& c : V) {
        if (affine_rank(std::vector<LatticePoint>{V[a], V[b], c}) <= 1) ++on;
      }
      best = std::max(best, on);
    }
  }
  return best;
}

}  // namespace

TEST(Search, NoThreeInLine) {
  for (Coord n = 2; n <= 4; ++n) {
    const auto res = max_grid_set(config(2, 1, 3, n));
    EXPECT_TRUE(res.optimal);
    EXPECT_EQ(res.best_set.size(), static_cast<std::size_t>(2 * n));
    EXPECT_TRUE(oracle::flat_free(res.best_set.points(), 1, 3));
  }
}

TEST(Search, MatchesBruteForce) {
  struct Case {
    std::size_t d, k, r;
    Coord n;
  };
  for (const auto& c : {Case{2, 1, 3, 3}, Case{2, 1, 4, 3}, Case{2, 1, 3, 4}, Case{2, 1, 4, 4}, Case{3, 1, 3, 2},
                        Case{3, 2, 4, 2}, Case{2, 1, 5, 4}}) {
    const auto cfg = config(c.d, c.k, c.r, c.n);
    const auto res = max_grid_set(cfg);
    ASSERT_TRUE(res.optimal);
    const auto grid = oracle::grid(c.d, c.n);
    EXPECT_EQ(res.best_set.size(), oracle::max_flat_free(grid, c.k, c.r))
        << "d=" << c.d << " k=" << c.k << " r=" << c.r << " n=" << c.n;
    EXPECT_TRUE(oracle::flat_free(res.best_set.points(), c.k, c.r));
    EXPECT_LE(BigInt(res.best_set.size()), covering_bound(cfg));
  }
}

TEST(Search, MonotoneInSideAndSymmetryNeutral) {
  std::size_t prev = 0;
  for (Coord n = 2; n <= 5; ++n) {
    auto cfg = config(2, 1, 4, n);
    const auto with = max_grid_set(cfg);
    cfg.use_symmetry = false;
    const auto without = max_grid_set(cfg);
    ASSERT_TRUE(with.optimal && without.optimal);
    EXPECT_EQ(with.best_set.size(), without.best_set.size());
    EXPECT_GE(with.best_set.size(), prev);
    EXPECT_GE(with.symmetry_group_order, 1U);
    prev = with.best_set.size();
  }
}

TEST(Search, Deterministic) {
  for (std::uint64_t seed : {0ULL, 7ULL}) {
    auto cfg = config(2, 1, 3, 4);
    cfg.seed = seed;
    const auto a = max_grid_set(cfg);
    const auto b = max_grid_set(cfg);
    EXPECT_EQ(a.best_set, b.best_set);
    EXPECT_EQ(a.nodes, b.nodes);
  }
}

TEST(Search, BudgetExhaustionIsNotAnError) {
  auto cfg = config(2, 1, 3, 6);
  cfg.node_budget = 3;
  const auto res = max_grid_set(cfg);
  EXPECT_FALSE(res.optimal);
  EXPECT_TRUE(oracle::flat_free(res.best_set.points(), 1, 3));
  EXPECT_LE(BigInt(res.best_set.size()), covering_bound(cfg));
}

TEST(Search, Validation) {
  EXPECT_EQ(code_of([] { validate(config(2, 0, 3, 3)); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { validate(config(2, 2, 4, 3)); }), Errc::VacuousConstraint);
  EXPECT_EQ(code_of([] { validate(config(2, 1, 2, 3)); }), Errc::InvalidConfig);
  EXPECT_NO_THROW(validate(config(3, 2, 4, 3)));
}

TEST(Search, GeneralPositionSubsetMatchesBruteForce) {
  gen::Gen g(41);
  for (int iter = 0; iter < 25; ++iter) {
    const std::size_t d = 2 + g.index(2);
    const auto V = g.point_set(d, 4, 5 + g.index(9));
    const auto res = max_general_position_subset(V, kDefaultBudget, g.coin(), iter);
    ASSERT_TRUE(res.optimal);
    ASSERT_EQ(res.best_set.size(), oracle::max_flat_free(V.points(), d - 1, d + 1)) << "iter " << iter;
    for (const auto& p : res.best_set) ASSERT_TRUE(V.contains(p));
  }
}

TEST(FlatTuple, MatchesOracle) {
  gen::Gen g(42);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t d = 2 + g.index(2);
    const auto S = g.point_set(d, 4, 3 + g.index(7));
    const std::size_t k = 1 + g.index(d - 1);
    const std::size_t size = k + 2;
    const auto t = find_flat_tuple(S, k, size);
    ASSERT_EQ(!t.has_value(), oracle::flat_free(S.points(), k, size));
    ASSERT_EQ(is_flat_free(S, k, size), !t.has_value());
    if (t) {
      ASSERT_EQ(t->size(), size);
      ASSERT_LE(oracle::rational_rank(*t), k);
    }
  }
  EXPECT_EQ(code_of([] { is_flat_free(PointSet::full_grid(2, 10), 1, 3, 10); }), Errc::BudgetExceeded);
}

TEST(Greedy, CertificateHolds) {
  gen::Gen g(43);
  for (int iter = 0; iter < 60; ++iter) {
    const auto V = g.point_set(2, 6, 4 + g.index(15));
    const std::size_t L = max_on_line(V);
    const std::size_t s = std::max<std::size_t>(1, L - 1);
    const auto order = g.coin() ? GreedyOrder::Shuffled : GreedyOrder::Lexicographic;
    const auto res = greedy_general_position(V, s, order, iter);
    ASSERT_TRUE(res.holds);
    ASSERT_EQ(res.input_size, V.size());
    ASSERT_TRUE(oracle::flat_free(res.subset.points(), 1, 3));
    ASSERT_GE(res.lhs, BigInt(V.size()));
    ASSERT_EQ(res.lhs, BigInt(s) * binomial(res.subset.size(), 2) + res.subset.size());
    if (L >= 4) {
      ASSERT_EQ(code_of([&] { greedy_general_position(V, L - 2); }), Errc::HypothesisViolated);
    }
  }
}

TEST(Greedy, MaximalOnGrid) {
  const auto V = PointSet::full_grid(2, 5);
  const auto res = greedy_general_position(V, 4);
  // Maximal: every remaining point closes a collinear triple.
  for (const auto& p : V) {
    if (res.subset.contains(p)) continue;
    auto pts = std::vector<LatticePoint>(res.subset.begin(), res.subset.end());
    pts.push_back(p);
    EXPECT_FALSE(oracle::flat_free(pts, 1, 3)) << to_string(p);
  }
}
