#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "gridpos/additive.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"
#include "gridpos/search.hpp"
#include "oracles.hpp"

using namespace gridpos;

namespace {

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

std::vector<LatticePoint> ints(std::initializer_list<Coord> xs) {
  std::vector<LatticePoint> out;
  for (auto x : xs) out.push_back(LatticePoint{x});
  return out;
}

PointSet int_set(std::initializer_list<Coord> xs, Coord side) { return PointSet(1, side, ints(xs)); }

// Greedy random set in [side] passing verify_eq5 at r = 1.
PointSet sidon_type(gen::Gen& g, Coord side, std::size_t target) {
  std::vector<LatticePoint> pts;
  for (int attempt = 0; attempt < 200 && pts.size() < target; ++attempt) {
    const LatticePoint x{g.uniform(1, side)};
    if (std::find(pts.begin(), pts.end(), x) != pts.end()) continue;
    auto trial = pts;
    trial.push_back(x);
    if (verify_eq5(PointSet(1, side, trial), 1).holds) pts = trial;
  }
  return PointSet(1, side, pts);
}

std::vector<Subset> r_subsets(std::size_t n, std::size_t r) {
  std::vector<Subset> out;
  for_each_combination(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(r),
                       [&](std::span<const std::uint32_t> c) { out.emplace_back(c.begin(), c.end()); });
  return out;
}

LatticePoint sum_of(const PointSet& V, const Subset& s) {
  LatticePoint t = LatticePoint::zero(V.dim());
  for (auto i : s) t += V[i];
  return t;
}

std::size_t shared(const Subset& a, const Subset& b) {
  std::size_t c = 0;
  for (auto x : a) c += std::count(b.begin(), b.end(), x);
  return c;
}

}  // namespace

TEST(Trivial, MatchesPartitionOracle) {
  gen::Gen g(51);
  int solutions = 0;
  for (int iter = 0; iter < 20000 && solutions < 2000; ++iter) {
    const std::size_t n = 2 + g.index(4);
    std::vector<Coord> coeffs(n);
    std::vector<LatticePoint> vals;
    for (auto& c : coeffs) c = g.coin() ? g.uniform(1, 3) : -g.uniform(1, 3);
    for (std::size_t i = 0; i < n; ++i) vals.push_back(g.point(1, 1, 4));
    Coord s = 0;
    for (std::size_t i = 0; i < n; ++i) s += coeffs[i] * vals[i][0];
    if (s != 0) continue;
    ++solutions;
    ASSERT_EQ(is_trivial_solution(vals, coeffs), oracle::trivial_by_partitions(vals, coeffs)) << "iter " << iter;
  }
  EXPECT_GE(solutions, 500);
  EXPECT_EQ(code_of([] { is_trivial_solution(ints({1, 2}), std::vector<Coord>{1}); }), Errc::LengthMismatch);
  EXPECT_EQ(code_of([] { is_trivial_solution(ints({1, 2}), std::vector<Coord>{1, 1}); }), Errc::NotASolution);
  EXPECT_TRUE(is_trivial_solution(ints({3, 3}), std::vector<Coord>{2, -2}));
  EXPECT_FALSE(is_trivial_solution(ints({1, 4, 2, 3}), std::vector<Coord>{1, 1, -1, -1}));
}

TEST(NontrivialSolution, MatchesEnumeration) {
  gen::Gen g(52);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t d = 1 + g.index(2);
    const auto V = g.point_set(d, 8, 2 + g.index(6));
    EquationSpec spec;
    spec.ambient_dim = d;
    const std::size_t n = 2 + g.index(3);
    for (std::size_t i = 0; i < n; ++i) spec.coeffs.push_back(g.coin() ? g.uniform(1, 3) : -g.uniform(1, 3));
    const auto got = find_nontrivial_solution(V, spec);
    const auto want = oracle::first_nontrivial(V.points(), spec.coeffs);
    ASSERT_EQ(got.has_value(), want.has_value()) << "iter " << iter;
    if (got) {
      ASSERT_EQ(*got, *want) << "iter " << iter;
    }
  }
}

TEST(Eq5, KnownSets) {
  EXPECT_EQ(eq5_coefficient_bound(30, 1, 1), BigInt(3));
  EXPECT_EQ(eq5_coefficient_bound(26, 1, 1), BigInt(2));
  EXPECT_EQ(eq5_coefficient_bound(27, 1, 1), BigInt(3));
  EXPECT_EQ(eq5_coefficient_bound(100, 2, 1), BigInt(6));  // 10000^(1/5)
  EXPECT_EQ(eq5_coeffs(1, 2, 3), (std::vector<Coord>{2, -2, -3, 3}));

  const auto sidon = int_set({1, 2, 5, 11}, 11);
  const auto r = verify_eq5(sidon, 1);
  EXPECT_EQ(r.bound, BigInt(2));
  ASSERT_FALSE(r.holds);  // 11 - 5 = 2 (5 - 2)
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(verify_eq5(sidon, 1, kDefaultBudget, BigInt(1)).holds);
  const auto bad = verify_eq5(int_set({1, 2, 3, 4}, 4), 1);
  EXPECT_FALSE(bad.holds);
  const auto& w = *bad.witness;
  EXPECT_FALSE(is_trivial_solution(w.values, eq5_coeffs(1, w.c1, w.c2)));
}

TEST(Eq5, MatchesNaiveRankOne) {
  gen::Gen g(53);
  for (int iter = 0; iter < 60; ++iter) {
    const auto V = g.point_set(1, 30, 1 + g.index(12));
    const auto M = eq5_coefficient_bound(30, 1, 1);
    ASSERT_EQ(verify_eq5(V, 1).holds, oracle::eq5_holds(V.points(), 1, M.convert_to<Coord>())) << "iter " << iter;
  }
}

TEST(Eq5, MatchesNaiveRankTwo) {
  gen::Gen g(54);
  for (int iter = 0; iter < 12; ++iter) {
    const auto V = g.point_set(1, 40, 2 + g.index(5));
    const auto M = eq5_coefficient_bound(40, 1, 2);
    ASSERT_EQ(verify_eq5(V, 2).holds, oracle::eq5_holds(V.points(), 2, M.convert_to<Coord>())) << "iter " << iter;
  }
}

TEST(Bg, Checks) {
  const auto r = bg_check(int_set({1, 2, 3}, 3), 2, 1);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.values.size(), 4U);
  EXPECT_TRUE(bg_check(int_set({1, 2, 5, 11}, 11), 2, 1).holds);
  EXPECT_FALSE(bg_check(int_set({1, 2, 5, 11}, 11), 2, 2).holds);
}

TEST(SumProfile, CollisionAndBijectivity) {
  const auto V = int_set({1, 2, 3, 4}, 4);
  const auto p = sum_profile(V, 2);
  EXPECT_FALSE(p.bijective);
  ASSERT_TRUE(p.collision);
  EXPECT_EQ(sum_of(V, p.collision->first), sum_of(V, p.collision->second));
  EXPECT_TRUE(sum_profile(int_set({1, 2, 5, 11}, 11), 2).bijective);
  EXPECT_EQ(code_of([&] { sigma_preimages(V, 2); }), Errc::NonBijectiveSigma);
}

// A set with no k+2 points on a k-flat (k even) has distinct
// (k/2+1)-subset sums, so C(|V|, k/2+1) <= (k n)^d.
TEST(SumProfile, DistinctSumsOnFlatFreeSets) {
  gen::Gen g(55);
  const std::size_t k = 2;
  for (int iter = 0; iter < 20; ++iter) {
    const std::size_t d = 3;
    const Coord n = 4;
    std::vector<LatticePoint> pts;
    for (int attempt = 0; attempt < 60; ++attempt) {
      auto trial = pts;
      trial.push_back(g.point(d, 1, n));
      if (std::find(pts.begin(), pts.end(), trial.back()) != pts.end()) continue;
      if (is_flat_free(PointSet(d, n, trial), k, k + 2)) pts = trial;
    }
    const PointSet V(d, n, pts);
    ASSERT_TRUE(oracle::flat_free(V.points(), k, k + 2));
    const auto prof = sum_profile(V, k / 2 + 1);
    ASSERT_TRUE(prof.bijective) << "iter " << iter;
    ASSERT_LE(binomial(V.size(), k / 2 + 1), gridpos::pow(BigInt(k * n), static_cast<unsigned>(d)));
  }
}

TEST(Phi, SymmetryMassAndBruteForce) {
  gen::Gen g(56);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t d = 1 + g.index(2);
    const auto U = g.distinct_points(d, d == 1 ? 30 : 10, 1 + g.index(12));
    const auto T = g.distinct_points(d, d == 1 ? 30 : 10, 1 + g.index(12));
    const auto t = phi(U, T);
    ASSERT_EQ(t.total(), U.size() * T.size());
    const auto uu = phi(U, U);
    for (const auto& [x, c] : uu.counts) {
      ASSERT_EQ(uu.at(LatticePoint::zero(d) - x), c);
      std::uint64_t brute = 0;
      for (const auto& a : U) {
        for (const auto& b : U) brute += (a - b == x);
      }
      ASSERT_EQ(brute, c);
    }
    ASSERT_EQ(uu.at(LatticePoint::zero(d)), U.size());
  }
  EXPECT_EQ(code_of([] { phi(ints({1}), std::vector<LatticePoint>{{1, 1}}); }), Errc::DimensionMismatch);
}

TEST(Cs, HoldsAndMatchesOracle) {
  gen::Gen g(57);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t d = 1 + g.index(2);
    const auto U = g.distinct_points(d, d == 1 ? 60 : 12, 1 + g.index(30));
    const auto T = g.distinct_points(d, d == 1 ? 60 : 12, 1 + g.index(30));
    const auto r = check_cs(U, T);
    ASSERT_TRUE(r.holds);
    ASSERT_EQ(r.rhs, oracle::energy(U, T));
    ASSERT_EQ(r.sumset_size, oracle::sumset_size(U, T));
    const BigInt prod = BigInt(U.size()) * T.size();
    ASSERT_EQ(r.lhs, Rational(prod * prod, BigInt(r.sumset_size)));
    ASSERT_LE(r.lhs, Rational(r.rhs));
  }
}

TEST(Dissection, PartsCoverSums) {
  gen::Gen g(58);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t d = 1 + g.index(2);
    const auto sums = g.distinct_points(d, 40, 1 + g.index(25));
    const Coord j = g.uniform(1, 5);
    const auto dis = dissect(sums, j);
    std::size_t covered = 0;
    for (const auto& [w, part] : dis.parts) {
      for (std::size_t a = 0; a < d; ++a) {
        ASSERT_GE(w[a], 0);
        ASSERT_LT(w[a], j);
      }
      for (const auto& u : part) {
        ASSERT_NE(std::find(sums.begin(), sums.end(), u.scaled(j) + w), sums.end());
      }
      covered += part.size();
    }
    ASSERT_EQ(covered, sums.size());
  }
}

TEST(Stratified, AgainstSubsetPairEnumeration) {
  gen::Gen g(59);
  for (int iter = 0; iter < 8; ++iter) {
    const auto V = sidon_type(g, 40, 6);
    const std::size_t r = 1 + g.index(2);
    if (!sum_profile(V, r).bijective) continue;
    const auto sigma = sigma_preimages(V, r);
    const auto subs = r_subsets(V.size(), r);
    for (Coord j = 1; j <= 3; ++j) {
      for (Coord x = -6; x <= 6; ++x) {
        std::uint64_t want = 0;
        for (const auto& a : subs) {
          for (const auto& b : subs) {
            if (shared(a, b) == 0 && sum_of(V, a) - sum_of(V, b) == LatticePoint{j * x}) ++want;
          }
        }
        // stratum0_mass sums over 1..m; take differences to isolate j.
        const auto got = stratum0_mass(sigma, 1, j, LatticePoint{x}) - stratum0_mass(sigma, 1, j - 1, LatticePoint{x});
        ASSERT_EQ(got, want) << "j=" << j << " x=" << x;
      }
      for (std::size_t i = 1; i <= r; ++i) {
        for (Coord ell : {1, 2, 4}) {
          BigInt want = 0;
          for (const auto& a : subs) {
            for (const auto& b : subs) {
              if (shared(a, b) != i) continue;
              const Coord diff = (sum_of(V, a) - sum_of(V, b))[0];
              if (diff % j != 0) continue;
              const Coord ax = std::abs(diff / j);
              if (ax < ell) want += ell - ax;
            }
          }
          const auto m = stratified_mass(sigma, V.size(), 1, r, j, i, ell);
          ASSERT_EQ(m.lhs, want);
          ASSERT_EQ(m.rhs, gridpos::pow(BigInt(V.size()), static_cast<unsigned>(2 * r - i)) * ell);
          ASSERT_TRUE(m.holds);
        }
      }
    }
  }
}

TEST(Stratified, StratumZeroAtMostOneOnValidSets) {
  gen::Gen g(60);
  for (int iter = 0; iter < 10; ++iter) {
    const auto V = sidon_type(g, 60, 8);
    ASSERT_TRUE(verify_eq5(V, 1).holds);
    const auto sigma = sigma_preimages(V, 1);
    const Coord m = eq5_coefficient_bound(60, 1, 1).convert_to<Coord>();
    for (Coord x = -60; x <= 60; ++x) {
      if (x == 0) continue;
      ASSERT_LE(stratum0_mass(sigma, 1, m, LatticePoint{x}), 1U) << "x=" << x;
    }
  }
}

TEST(Bounds, Exponents) {
  const auto mb = multifold_bound(4, 1);
  EXPECT_EQ(mb.exponent, Rational(16, 9));
  EXPECT_EQ(mb.m_exponent, Rational(4, 9));
  EXPECT_EQ(mb.l_exponent, Rational(5, 9));
  const auto fb = flat_bound(4, 2);
  EXPECT_EQ(fb.multifold.r, 1U);
  EXPECT_EQ(fb.lefmann_exponent, Rational(2));
  EXPECT_EQ(fb.trivial_exponent, Rational(2));
  EXPECT_TRUE(fb.improves);
  // k + 2 = 4 (mod 4) and 5 (mod 4 = 1) improve; 6 and 7 do not.
  EXPECT_TRUE(flat_bound(5, 3).improves);
  EXPECT_FALSE(flat_bound(5, 4).improves);
  EXPECT_FALSE(flat_bound(6, 5).improves);
  EXPECT_EQ(code_of([] { flat_bound(4, 1); }), Errc::InvalidConfig);
}
