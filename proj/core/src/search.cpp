#include "gridpos/search.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <unordered_map>

#include "gridpos/affine.hpp"
#include "gridpos/checked_int.hpp"
#include "gridpos/combinatorics.hpp"
#include "gridpos/error.hpp"
#include "gridpos/random.hpp"

namespace gridpos {

namespace {

constexpr std::uint64_t kMaxFlatsPerFamily = 1u << 20;
constexpr std::size_t kMaxFamilies = 70;
constexpr std::size_t kMaxSymmetryDim = 6;

LatticePoint line_direction(const LatticePoint& from, const LatticePoint& to) {
  LatticePoint v = to - from;
  Coord g = 0;
  for (std::size_t i = 0; i < v.dim(); ++i) g = std::gcd(g, v[i]);
  std::size_t lead = 0;
  while (lead < v.dim() && v[lead] == 0) ++lead;
  if (lead < v.dim() && v[lead] < 0) g = -g;
  for (std::size_t i = 0; i < v.dim(); ++i) v[i] /= g;
  return v;
}

// Branch and bound over subsets of a fixed universe avoiding r points on a
// k-flat. Candidates are always the points that keep the chosen set
// feasible, so every explored set is valid.
class Engine {
 public:
  Engine(std::span<const LatticePoint> universe, std::size_t dim, std::size_t k, std::size_t r, Coord side,
         std::uint64_t budget, std::uint64_t seed)
      : u_(universe), dim_(dim), k_(k), r_(r), side_(side), budget_(budget), seed_(seed) {
    build_families();
    tie_.resize(u_.size());
    for (std::uint32_t i = 0; i < u_.size(); ++i) tie_[i] = seed_ == 0 ? i : splitmix64(seed_ ^ splitmix64(i));
  }

  void run(bool use_symmetry) {
    greedy_start();
    std::vector<std::uint32_t> all(u_.size());
    std::iota(all.begin(), all.end(), 0U);
    std::vector<std::uint32_t> chosen;
    if (!use_symmetry || dim_ > kMaxSymmetryDim) {
      expand(chosen, all);
      return;
    }
    // Any solution meets a first orbit i; mapping its point there onto the
    // orbit's representative keeps orbits < i untouched.
    const auto orbit = orbits();
    std::vector<bool> excluded(u_.size(), false);
    for (std::uint32_t rep = 0; rep < u_.size() && !stopped_; ++rep) {
      if (orbit[rep] != rep) continue;
      std::vector<std::uint32_t> rest;
      for (auto i : all) {
        if (i != rep && !excluded[i]) rest.push_back(i);
      }
      chosen.push_back(rep);
      if (!count_node()) break;
      expand(chosen, filter(std::vector<std::uint32_t>{}, rep, rest));
      chosen.pop_back();
      for (auto i : all) {
        if (orbit[i] == rep) excluded[i] = true;
      }
    }
  }

  const std::vector<std::uint32_t>& best() const { return best_; }
  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return !stopped_; }
  std::uint64_t group_order() const { return group_order_; }

  // Candidates of `cand` that stay feasible once q joins `chosen`.
  std::vector<std::uint32_t> filter(const std::vector<std::uint32_t>& chosen, std::uint32_t q,
                                    std::span<const std::uint32_t> cand) const {
    std::vector<std::uint32_t> out;
    const std::size_t need = r_ - 2;  // points of `chosen` completing q, c to r
    if (chosen.size() < need) {
      out.assign(cand.begin(), cand.end());
      return out;
    }
    if (k_ == 1) {
      std::unordered_map<LatticePoint, std::size_t, LatticePointHash> on_line;
      for (auto s : chosen) ++on_line[line_direction(u_[q], u_[s])];
      for (auto c : cand) {
        auto it = on_line.find(line_direction(u_[q], u_[c]));
        if (it == on_line.end() || it->second < need) out.push_back(c);
      }
      return out;
    }
    std::set<FlatEquations> blocked;
    bool all_blocked = false;
    std::vector<const LatticePoint*> refs(need + 1);
    for_each_combination(static_cast<std::uint32_t>(chosen.size()), static_cast<std::uint32_t>(need),
                         [&](std::span<const std::uint32_t> pick) {
                           if (all_blocked) return;
                           for (std::size_t i = 0; i < need; ++i) refs[i] = &u_[chosen[pick[i]]];
                           refs[need] = &u_[q];
                           const std::size_t rank = affine_rank(refs);
                           if (rank < k_) {
                             all_blocked = true;
                           } else if (rank == k_) {
                             blocked.insert(flat_through(refs));
                           }
                         });
    if (all_blocked) return out;
    for (auto c : cand) {
      bool ok = true;
      for (const auto& f : blocked) {
        if (f.contains(u_[c])) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(c);
    }
    return out;
  }

 private:
  struct Choice {
    std::uint64_t capacity;
    std::uint32_t pick;
  };

  void build_families() {
    if (k_ >= dim_) return;
    const std::size_t fixed = dim_ - k_;
    unsigned __int128 flats = 1;
    for (std::size_t i = 0; i < fixed; ++i) flats *= static_cast<std::uint64_t>(side_);
    if (flats > kMaxFlatsPerFamily || binomial_saturating(dim_, fixed) > kMaxFamilies) return;
    flats_per_family_ = static_cast<std::size_t>(flats);
    for_each_combination(static_cast<std::uint32_t>(dim_), static_cast<std::uint32_t>(fixed),
                         [&](std::span<const std::uint32_t> coords) {
                           std::vector<std::uint32_t> ids(u_.size());
                           for (std::size_t i = 0; i < u_.size(); ++i) {
                             std::uint64_t id = 0;
                             for (auto c : coords) id = id * static_cast<std::uint64_t>(side_) + (u_[i][c] - 1);
                             ids[i] = static_cast<std::uint32_t>(id);
                           }
                           flat_id_.push_back(std::move(ids));
                         });
    chosen_count_.assign(flat_id_.size(), std::vector<std::uint32_t>(flats_per_family_, 0));
    cand_count_ = chosen_count_;
  }

  // Capacity bound: each axis-parallel k-flat of one family holds at most
  // r-1 points of a solution. Also picks the branching point: most chosen
  // points sharing its axis flats, ties by index or seeded hash.
  Choice evaluate(const std::vector<std::uint32_t>& chosen, const std::vector<std::uint32_t>& cand) {
    Choice out{cand.size(), cand.front()};
    if (flat_id_.empty()) {
      std::uint32_t best = cand.front();
      for (auto c : cand) {
        if (tie_[c] < tie_[best]) best = c;
      }
      out.pick = best;
      return out;
    }
    const std::uint32_t cap = static_cast<std::uint32_t>(r_ - 1);
    for (std::size_t f = 0; f < flat_id_.size(); ++f) {
      auto& sc = chosen_count_[f];
      auto& cc = cand_count_[f];
      for (auto s : chosen) ++sc[flat_id_[f][s]];
      for (auto c : cand) ++cc[flat_id_[f][c]];
      std::uint64_t room = 0;
      // Only flats touched by a candidate can grow.
      for (auto c : cand) {
        const auto id = flat_id_[f][c];
        if (cc[id] == 0) continue;
        room += std::min(cap, sc[id] + cc[id]) - std::min(cap, sc[id]);
        cc[id] = 0;
      }
      out.capacity = std::min(out.capacity, room);
    }
    std::uint64_t best_score = 0;
    bool have = false;
    for (auto c : cand) {
      std::uint64_t score = 0;
      for (std::size_t f = 0; f < flat_id_.size(); ++f) score += chosen_count_[f][flat_id_[f][c]];
      if (!have || score > best_score || (score == best_score && tie_[c] < tie_[out.pick])) {
        best_score = score;
        out.pick = c;
        have = true;
      }
    }
    for (std::size_t f = 0; f < flat_id_.size(); ++f) {
      for (auto s : chosen) chosen_count_[f][flat_id_[f][s]] = 0;
    }
    return out;
  }

  bool count_node() {
    if (nodes_ >= budget_) {
      stopped_ = true;
      return false;
    }
    ++nodes_;
    return true;
  }

  void expand(std::vector<std::uint32_t>& chosen, std::vector<std::uint32_t> cand) {
    if (chosen.size() > best_.size()) best_ = chosen;
    while (!cand.empty() && !stopped_) {
      if (!count_node()) return;
      const Choice choice = evaluate(chosen, cand);
      if (chosen.size() + choice.capacity <= best_.size()) return;
      cand.erase(std::find(cand.begin(), cand.end(), choice.pick));
      auto next = filter(chosen, choice.pick, cand);
      chosen.push_back(choice.pick);
      expand(chosen, std::move(next));
      chosen.pop_back();
    }
  }

  void greedy_start() {
    std::vector<std::uint32_t> cand(u_.size());
    std::iota(cand.begin(), cand.end(), 0U);
    std::sort(cand.begin(), cand.end(), [&](auto a, auto b) { return tie_[a] < tie_[b]; });
    std::vector<std::uint32_t> chosen;
    while (!cand.empty()) {
      const auto q = cand.front();
      cand.erase(cand.begin());
      cand = filter(chosen, q, cand);
      chosen.push_back(q);
    }
    std::sort(chosen.begin(), chosen.end());
    best_ = chosen;
  }

  // orbit[i] = smallest index in the orbit of point i under the symmetries
  // of the cube [1, side]^d that map the universe onto itself.
  std::vector<std::uint32_t> orbits() {
    std::unordered_map<LatticePoint, std::uint32_t, LatticePointHash> where;
    for (std::uint32_t i = 0; i < u_.size(); ++i) where.emplace(u_[i], i);
    std::vector<std::uint32_t> parent(u_.size());
    std::iota(parent.begin(), parent.end(), 0U);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<std::size_t> perm(dim_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::uint32_t> image(u_.size());
    group_order_ = 0;
    do {
      for (std::uint64_t flips = 0; flips < (std::uint64_t{1} << dim_); ++flips) {
        bool closed = true;
        for (std::uint32_t i = 0; i < u_.size() && closed; ++i) {
          LatticePoint p = LatticePoint::zero(dim_);
          for (std::size_t a = 0; a < dim_; ++a) {
            const Coord x = u_[i][perm[a]];
            p[a] = (flips >> a & 1) ? side_ + 1 - x : x;
          }
          auto it = where.find(p);
          if (it == where.end()) {
            closed = false;
          } else {
            image[i] = it->second;
          }
        }
        if (!closed) continue;
        ++group_order_;
        for (std::uint32_t i = 0; i < u_.size(); ++i) {
          const auto a = find(i);
          const auto b = find(image[i]);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::uint32_t> out(u_.size());
    for (std::uint32_t i = 0; i < u_.size(); ++i) out[i] = find(i);
    return out;
  }

  std::span<const LatticePoint> u_;
  std::size_t dim_, k_, r_;
  Coord side_;
  std::uint64_t budget_, seed_;
  std::vector<std::uint64_t> tie_;
  std::size_t flats_per_family_ = 0;
  std::vector<std::vector<std::uint32_t>> flat_id_;
  std::vector<std::vector<std::uint32_t>> chosen_count_;
  std::vector<std::vector<std::uint32_t>> cand_count_;
  std::vector<std::uint32_t> best_;
  std::uint64_t nodes_ = 0;
  std::uint64_t group_order_ = 1;
  bool stopped_ = false;
};

SearchResult finish(const PointSet& universe, const Engine& engine, std::size_t k, std::size_t r,
                    std::chrono::steady_clock::time_point start) {
  SearchResult out;
  std::vector<std::uint32_t> best = engine.best();
  out.best_set = universe.subset(best);
  out.optimal = engine.exhausted();
  out.nodes = engine.nodes();
  out.symmetry_group_order = engine.group_order();
  ensure(is_flat_free(out.best_set, k, r, UINT64_MAX), "search returned a set with r points on a k-flat");
  const BigInt cap = BigInt(r - 1) * pow(BigInt(universe.side()), static_cast<unsigned>(universe.dim() - k));
  ensure(BigInt(out.best_set.size()) <= cap, "search result exceeds (r-1) n^(d-k)");
  out.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// True iff no (r-1)-subset of `chosen` joins q on a k-flat.
bool extends(const std::vector<const LatticePoint*>& chosen, const LatticePoint& q, std::size_t k, std::size_t r) {
  const std::size_t need = r - 1;
  if (chosen.size() < need) return true;
  std::vector<const LatticePoint*> refs(need + 1);
  bool ok = true;
  for_each_combination(static_cast<std::uint32_t>(chosen.size()), static_cast<std::uint32_t>(need),
                       [&](std::span<const std::uint32_t> pick) {
                         if (!ok) return;
                         for (std::size_t i = 0; i < need; ++i) refs[i] = chosen[pick[i]];
                         refs[need] = &q;
                         if (affine_rank(refs) <= k) ok = false;
                       });
  return ok;
}

}  // namespace

void validate(const SearchConfig& cfg) {
  if (cfg.d == 0 || cfg.n < 1) fail(Errc::InvalidConfig, "d and n must be positive");
  if (cfg.k == 0) fail(Errc::InvalidConfig, "k must be positive");
  if (cfg.k >= cfg.d) {
    fail(Errc::VacuousConstraint, "k = " + std::to_string(cfg.k) + " >= d = " + std::to_string(cfg.d));
  }
  if (cfg.r < cfg.k + 2) {
    fail(Errc::InvalidConfig, "r = " + std::to_string(cfg.r) + " < k + 2; any r <= k+1 points lie on a k-flat");
  }
  if (cfg.node_budget == 0) fail(Errc::InvalidConfig, "node budget must be positive");
}

SearchResult max_grid_set(const SearchConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const PointSet grid = PointSet::full_grid(cfg.d, cfg.n);
  Engine engine(grid.points(), cfg.d, cfg.k, cfg.r, cfg.n, cfg.node_budget, cfg.seed);
  engine.run(cfg.use_symmetry);
  return finish(grid, engine, cfg.k, cfg.r, start);
}

SearchResult max_general_position_subset(const PointSet& V, std::uint64_t node_budget, bool use_symmetry,
                                         std::uint64_t seed) {
  if (node_budget == 0) fail(Errc::InvalidConfig, "node budget must be positive");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t d = V.dim();
  Engine engine(V.points(), d, d - 1, d + 1, V.side(), node_budget, seed);
  engine.run(use_symmetry);
  return finish(V, engine, d - 1, d + 1, start);
}

std::optional<std::vector<LatticePoint>> find_flat_tuple(const PointSet& S, std::size_t k, std::size_t size,
                                                         std::uint64_t budget) {
  if (size == 0) fail(Errc::InvalidConfig, "tuple size must be positive");
  if (S.size() < size) return std::nullopt;
  require_budget(binomial_saturating(S.size(), size), budget, "flat tuple scan");
  std::optional<std::vector<LatticePoint>> found;
  std::vector<const LatticePoint*> refs(size);
  for_each_combination(static_cast<std::uint32_t>(S.size()), static_cast<std::uint32_t>(size),
                       [&](std::span<const std::uint32_t> pick) {
                         if (found) return;
                         for (std::size_t i = 0; i < size; ++i) refs[i] = &S[pick[i]];
                         if (affine_rank(refs) <= k) {
                           found.emplace();
                           for (const auto* p : refs) found->push_back(*p);
                         }
                       });
  return found;
}

bool is_flat_free(const PointSet& S, std::size_t k, std::size_t size, std::uint64_t budget) {
  return !find_flat_tuple(S, k, size, budget).has_value();
}

GreedyResult greedy_general_position(const PointSet& V, std::size_t s, GreedyOrder order, std::uint64_t seed,
                                     std::uint64_t budget) {
  if (s == 0) fail(Errc::InvalidConfig, "s must be positive");
  const std::size_t d = V.dim();
  if (auto bad = find_flat_tuple(V, d - 1, d + s, budget)) {
    std::string pts;
    for (const auto& p : *bad) pts += (pts.empty() ? "" : " ") + to_string(p);
    fail(Errc::HypothesisViolated, std::to_string(d + s) + " points on a hyperplane: " + pts);
  }
  std::vector<std::uint32_t> sequence(V.size());
  std::iota(sequence.begin(), sequence.end(), 0U);
  if (order == GreedyOrder::Shuffled) {
    std::vector<std::uint64_t> key(V.size());
    for (std::uint32_t i = 0; i < V.size(); ++i) key[i] = splitmix64(seed ^ splitmix64(i));
    std::sort(sequence.begin(), sequence.end(), [&](auto a, auto b) { return key[a] < key[b]; });
  }
  std::vector<const LatticePoint*> chosen;
  std::vector<std::uint32_t> picked;
  for (auto i : sequence) {
    if (extends(chosen, V[i], d - 1, d + 1)) {
      chosen.push_back(&V[i]);
      picked.push_back(i);
    }
  }
  GreedyResult out;
  out.subset = V.subset(picked);
  out.s = s;
  out.input_size = V.size();
  out.lhs = BigInt(s) * binomial(out.subset.size(), d) + out.subset.size();
  out.holds = out.lhs >= out.input_size;
  ensure(out.holds, "greedy certificate s C(|V'|, d) + |V'| >= |V| failed");
  return out;
}

}  // namespace gridpos
