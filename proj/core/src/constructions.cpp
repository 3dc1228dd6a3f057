#include "gridpos/constructions.hpp"

#include <algorithm>
#include <numeric>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "gridpos/affine.hpp"
#include "gridpos/checked_int.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"
#include "gridpos/parallel.hpp"
#include "gridpos/random.hpp"
#include "gridpos/search.hpp"

namespace gridpos {

namespace {

using Decimal = boost::multiprecision::cpp_dec_float_50;

std::uint64_t flat_exponent(std::size_t d, std::size_t r, std::size_t s) { return (r + 1) * d + (s - 1) * r; }

// Every maximal line of [n]^d meets the grid in L points and contributes
// C(L, size) collinear size-subsets.
BigInt count_collinear(Coord n, std::size_t d, std::size_t size, std::uint64_t budget) {
  const std::uint64_t cells = grid_size(d, n);
  const std::uint64_t dirs = grid_size(d, 2 * n - 1);
  if (cells != 0 && dirs > UINT64_MAX / cells) fail(Errc::BudgetExceeded, "line enumeration too large");
  require_budget(dirs * cells, budget, "line enumeration");
  BigInt total = 0;
  LatticePoint v = LatticePoint::zero(d);
  for (std::uint64_t di = 0; di < dirs; ++di) {
    std::uint64_t rest = di;
    for (std::size_t a = d; a-- > 0;) {
      v[a] = static_cast<Coord>(rest % static_cast<std::uint64_t>(2 * n - 1)) - (n - 1);
      rest /= static_cast<std::uint64_t>(2 * n - 1);
    }
    std::size_t lead = 0;
    while (lead < d && v[lead] == 0) ++lead;
    if (lead == d || v[lead] < 0) continue;
    Coord g = 0;
    for (std::size_t a = 0; a < d; ++a) g = std::gcd(g, v[a]);
    if (g != 1) continue;
    for (std::uint64_t ci = 0; ci < cells; ++ci) {
      const LatticePoint start = grid_point(ci, d, n);
      bool is_start = false;
      for (std::size_t a = 0; a < d && !is_start; ++a) {
        const Coord prev = start[a] - v[a];
        is_start = prev < 1 || prev > n;
      }
      if (!is_start) continue;
      std::uint64_t len = 0;
      LatticePoint p = start;
      for (;;) {
        bool inside = true;
        for (std::size_t a = 0; a < d; ++a) inside = inside && p[a] >= 1 && p[a] <= n;
        if (!inside) break;
        ++len;
        p += v;
      }
      if (len >= size) total += binomial(len, size);
    }
  }
  return total;
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t q = 2; q <= p / q; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

PointSet moment_curve(std::size_t d, std::uint64_t p) {
  if (d == 0) fail(Errc::InvalidConfig, "dimension must be positive");
  if (!is_prime(p)) fail(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (p > (std::uint64_t{1} << 31)) fail(Errc::ArithmeticOverflow, "modulus too large");
  std::vector<LatticePoint> pts;
  pts.reserve(p);
  for (std::uint64_t t = 0; t < p; ++t) {
    std::vector<Coord> c(d);
    std::uint64_t power = 1;
    for (std::size_t i = 0; i < d; ++i) {
      power = power * t % p;
      c[i] = static_cast<Coord>(power) + 1;
    }
    pts.emplace_back(std::move(c));
  }
  return PointSet(d, static_cast<Coord>(p), std::move(pts));
}

BigInt count_flat_tuples(Coord n, std::size_t d, std::size_t r, std::size_t size, std::uint64_t budget) {
  if (n < 1 || d == 0) fail(Errc::InvalidConfig, "n and d must be positive");
  const std::uint64_t cells = grid_size(d, n);
  if (size <= r + 1 || r >= d) return binomial(cells, size);
  if (r == 1) return count_collinear(n, d, size, budget);
  const PointSet grid = PointSet::full_grid(d, n);
  require_budget(binomial_saturating(cells, size), budget, "flat tuple count");
  BigInt total = 0;
  std::vector<const LatticePoint*> refs(size);
  for_each_combination(static_cast<std::uint32_t>(cells), static_cast<std::uint32_t>(size),
                       [&](std::span<const std::uint32_t> pick) {
                         for (std::size_t i = 0; i < size; ++i) refs[i] = &grid[pick[i]];
                         if (affine_rank(refs) <= r) ++total;
                       });
  return total;
}

void validate(const DeletionConfig& cfg) {
  if (cfg.r < 1) fail(Errc::InvalidConfig, "r must be at least 1");
  if (cfg.s < 2) fail(Errc::InvalidConfig, "s must be at least 2");
  if (cfg.d <= cfg.r) fail(Errc::InvalidConfig, "need d > r");
  if (cfg.n < 1) fail(Errc::InvalidConfig, "n must be positive");
  if (cfg.trials < 1) fail(Errc::InvalidConfig, "trials must be positive");
  if (cfg.p) {
    if (*cfg.p <= 0 || *cfg.p > 1) fail(Errc::ProbabilityOutOfRange, "p = " + to_string(*cfg.p) + " outside (0, 1]");
    if (denominator_of(*cfg.p) > BigInt(UINT64_MAX)) {
      fail(Errc::ProbabilityOutOfRange, "denominator of p exceeds 64 bits");
    }
  }
}

std::pair<BigInt, Coord> c6_count(const DeletionConfig& cfg) {
  const std::size_t size = cfg.r + cfg.s;
  Coord side = cfg.n;
  if (cfg.c6_mode == C6Mode::Estimate) {
    // Largest side whose brute-force enumeration fits the budget.
    side = 1;
    for (Coord m = cfg.n; m >= 1; --m) {
      if (binomial_saturating(grid_size(cfg.d, m), size) <= cfg.budget) {
        side = m;
        break;
      }
    }
  }
  return {count_flat_tuples(side, cfg.d, cfg.r, size, cfg.budget), side};
}

Rational auto_probability(const DeletionConfig& cfg, const Rational& c6, std::vector<std::string>& warnings) {
  const Rational half(1, 2);
  if (c6 == 0) {
    warnings.push_back("no flat tuples counted; p clamped to 1/2");
    return half;
  }
  const Decimal c6_dec = Decimal(numerator_of(c6).str()) / Decimal(denominator_of(c6).str());
  const Decimal m = static_cast<double>(cfg.r + cfg.s - 1);
  const Decimal e = static_cast<double>(cfg.r * (cfg.d + cfg.s - 1));
  const Decimal x = pow(2 * c6_dec, -1 / m) * pow(Decimal(cfg.n), -e / m);
  if (x >= Decimal(0.5)) {
    warnings.push_back("formula gives p = " + x.str(12) + " >= 1/2; clamped to 1/2");
    return half;
  }
  const Decimal scaled = floor(x * Decimal(4294967296.0));
  const auto num = scaled.convert_to<std::uint64_t>();
  if (num == 0) fail(Errc::ProbabilityOutOfRange, "formula gives p below 2^-32");
  return Rational(num, std::uint64_t{1} << 32);
}

DeletionReport deletion_trial(const DeletionConfig& cfg, const Rational& p, std::uint64_t trial) {
  const std::size_t size = cfg.r + cfg.s;
  const auto num = numerator_of(p).convert_to<std::uint64_t>();
  const auto den = denominator_of(p).convert_to<std::uint64_t>();
  CounterRng rng(cfg.seed, trial);
  const std::uint64_t cells = grid_size(cfg.d, cfg.n);
  std::vector<LatticePoint> sample;
  for (std::uint64_t i = 0; i < cells; ++i) {
    if (bernoulli(rng, num, den)) sample.push_back(grid_point(i, cfg.d, cfg.n));
  }
  const PointSet S(cfg.d, cfg.n, std::move(sample));

  DeletionReport rep;
  rep.trial = trial;
  rep.sampled_size = S.size();

  std::vector<std::vector<std::uint32_t>> tuples;
  if (S.size() >= size) {
    require_budget(binomial_saturating(S.size(), size), cfg.budget, "violation scan");
    std::vector<const LatticePoint*> refs(size);
    for_each_combination(static_cast<std::uint32_t>(S.size()), static_cast<std::uint32_t>(size),
                         [&](std::span<const std::uint32_t> pick) {
                           for (std::size_t i = 0; i < size; ++i) refs[i] = &S[pick[i]];
                           if (affine_rank(refs) <= cfg.r) tuples.emplace_back(pick.begin(), pick.end());
                         });
  }
  rep.violations_found = tuples.size();

  // Greedy hitting set: each still-unresolved tuple, in order, loses its
  // point that resolves the most tuples.
  std::vector<std::vector<std::uint32_t>> containing(S.size());
  std::vector<std::uint64_t> cover(S.size(), 0);
  for (std::uint32_t t = 0; t < tuples.size(); ++t) {
    for (auto i : tuples[t]) {
      containing[i].push_back(t);
      ++cover[i];
    }
  }
  std::vector<bool> resolved(tuples.size(), false);
  std::vector<bool> removed(S.size(), false);
  for (std::uint32_t t = 0; t < tuples.size(); ++t) {
    if (resolved[t]) continue;
    std::uint32_t victim = tuples[t].front();
    for (auto i : tuples[t]) {
      if (cover[i] > cover[victim]) victim = i;
    }
    removed[victim] = true;
    ++rep.deleted;
    for (auto u : containing[victim]) {
      if (resolved[u]) continue;
      resolved[u] = true;
      for (auto i : tuples[u]) --cover[i];
    }
  }
  std::vector<std::uint32_t> keep;
  for (std::uint32_t i = 0; i < S.size(); ++i) {
    if (!removed[i]) keep.push_back(i);
  }
  rep.output = S.subset(keep);
  rep.final_size = rep.output.size();
  ensure(rep.deleted <= rep.violations_found, "deleted more points than violating tuples");
  ensure(rep.final_size + rep.violations_found >= rep.sampled_size, "final size below sampled - violations");
  ensure(is_flat_free(rep.output, cfg.r, size, UINT64_MAX), "deletion output still has r+s points on an r-flat");
  return rep;
}

DeletionSummary deletion_construct(const DeletionConfig& cfg) {
  validate(cfg);
  DeletionSummary out;
  const std::uint64_t e = flat_exponent(cfg.d, cfg.r, cfg.s);
  auto [count, side] = c6_count(cfg);
  out.flat_tuples = count;
  out.c6_side = side;
  out.c6 = Rational(count, pow(BigInt(side), static_cast<unsigned>(e)));
  if (cfg.c6_mode == C6Mode::Estimate && side != cfg.n) {
    out.warnings.push_back("c6 estimated at side " + std::to_string(side));
  }
  if (cfg.p) {
    out.p = *cfg.p;
  } else {
    out.p_auto = true;
    out.p = auto_probability(cfg, out.c6, out.warnings);
  }
  const BigInt cells = pow(BigInt(cfg.n), static_cast<unsigned>(cfg.d));
  out.expected_size_bound =
      out.p * Rational(cells) -
      out.c6 * pow(out.p, static_cast<unsigned>(cfg.r + cfg.s)) * Rational(pow(BigInt(cfg.n), static_cast<unsigned>(e)));
  out.half_expected = out.p * Rational(cells) / 2;

  auto partials = run_chunked<std::vector<DeletionReport>>(cfg.threads, cfg.trials,
                                                           [&](std::uint64_t first, std::uint64_t last) {
                                                             std::vector<DeletionReport> part;
                                                             for (auto t = first; t < last; ++t) {
                                                               part.push_back(deletion_trial(cfg, out.p, t));
                                                             }
                                                             return part;
                                                           });
  for (auto& part : partials) {
    for (auto& rep : part) out.reports.push_back(std::move(rep));
  }

  const auto moments = [&](auto field, Rational& mean, Rational& var) {
    BigInt sum = 0, sq = 0;
    for (const auto& rep : out.reports) {
      const std::uint64_t x = rep.*field;
      sum += x;
      sq += BigInt(x) * x;
    }
    const BigInt t = out.reports.size();
    mean = Rational(sum, t);
    var = t > 1 ? (Rational(sq) - Rational(t) * mean * mean) / Rational(t - 1) : Rational(0);
  };
  moments(&DeletionReport::sampled_size, out.mean_sampled, out.var_sampled);
  moments(&DeletionReport::final_size, out.mean_final, out.var_final);
  return out;
}

bool within_standard_errors(const Rational& mean, const Rational& var, std::uint64_t trials, const Rational& target,
                            unsigned z) {
  if (mean >= target) return true;
  if (trials == 0) return false;
  const Rational gap = target - mean;
  return gap * gap <= Rational(z * z) * var / Rational(trials);
}

}  // namespace gridpos
