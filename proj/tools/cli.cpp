#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridpos/additive.hpp"
#include "gridpos/affine.hpp"
#include "gridpos/census.hpp"
#include "gridpos/constructions.hpp"
#include "gridpos/error.hpp"
#include "gridpos/point_io.hpp"
#include "gridpos/search.hpp"
#include "gridpos/selftest.hpp"

namespace gridpos::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = GRIDPOS_VERSION;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  Json report = Json::object();
  int code = kOk;
  std::optional<Table> table;
  std::optional<PointSet> points;
};

struct Common {
  std::string format = "json";
  std::string out;
  std::string points_out;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string input;
  std::string set;
  Coord side = 0;
};

struct Params {
  std::size_t d = 2;
  Coord n = 3;
  std::size_t k = 1;
  std::size_t r = 0;
  std::size_t s = 3;
  std::size_t g = 2;
  std::size_t m = 1;
  std::uint64_t p = 5;
  std::string mode = "exhaustive";
  std::string tau = "1/2";
  std::string epsilon = "1/4";
  std::string deltas;
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::string symmetry = "on";
  std::string order = "lex";
  std::string prob = "auto";
  std::string c6 = "exact";
  std::uint64_t trials = 1;
  std::string n_list;
  std::string u_set;
  std::string t_set;
  std::string bound;
  bool profile = false;
  std::string manifest;
};

std::uint64_t default_budget() {
  if (const char* env = std::getenv("GRIDPOS_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(Errc::ParseError, "GRIDPOS_BUDGET is not an integer");
    }
  }
  return kDefaultBudget;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Coord parse_coord(const std::string& token) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    fail(Errc::ParseError, "'" + token + "' is not an integer");
  }
}

// "1,2,5" (one-dimensional) or "1:1,2:3" (coordinates joined by ':').
std::vector<LatticePoint> parse_vectors(const std::string& text) {
  std::vector<LatticePoint> out;
  for (const auto& item : split(text, ',')) {
    std::vector<Coord> c;
    for (const auto& t : split(item, ':')) c.push_back(parse_coord(t));
    out.emplace_back(std::move(c));
  }
  return out;
}

Json point_json(const LatticePoint& p) {
  Json a = Json::array();
  for (auto x : p.coords()) a.push_back(x);
  return a;
}

Json points_json(std::span<const LatticePoint> pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

std::string json_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

class Runner {
 public:
  Runner(std::vector<std::string> args, std::ostream& out, std::ostream& err)
      : args_(std::move(args)), out_(out), err_(err) {}

  int run();

 private:
  CLI::App* add(CLI::App& app, const std::string& name, const std::string& about, bool takes_set);
  PointSet load_set(bool allow_grid);
  Json manifest(const std::string& name, const CLI::App& sub, double ms) const;
  void emit(const std::string& name, const CLI::App& sub, Outcome& outcome, double ms);

  Outcome census_cmd();
  Outcome degree_cmd();
  Outcome delta_cmd();
  Outcome search_cmd();
  Outcome gp_subset_cmd();
  Outcome greedy_cmd();
  Outcome moment_cmd();
  Outcome deletion_cmd();
  Outcome bg_cmd();
  Outcome eq5_cmd();
  Outcome phi_cmd();
  Outcome cs_cmd();
  Outcome trend_cmd();
  Outcome bounds_cmd();
  int selftest();
  int rerun();

  std::vector<std::string> args_;
  std::ostream& out_;
  std::ostream& err_;
  Common common_;
  Params p_;
  std::string input_label_;
};

CLI::App* Runner::add(CLI::App& app, const std::string& name, const std::string& about, bool takes_set) {
  auto* sub = app.add_subcommand(name, about);
  sub->add_option("--format", common_.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", common_.out, "write the report to this file");
  sub->add_option("--budget", common_.budget, "work budget (GRIDPOS_BUDGET)");
  sub->add_option("--threads", common_.threads, "worker threads")->check(CLI::Range(1U, 1024U));
  sub->add_option("--seed", common_.seed, "random seed");
  if (takes_set) {
    sub->add_option("--input", common_.input, "point-set or integer-list file");
    sub->add_option("--set", common_.set, "inline points, e.g. 1,2,5,11 or 1:1,2:3");
    sub->add_option("--side", common_.side, "grid side for --set (default: largest coordinate)");
  }
  return sub;
}

PointSet Runner::load_set(bool allow_grid) {
  if (!common_.input.empty()) {
    ParsedPointSet parsed = read_dataset(common_.input);
    if (parsed.reordered) err_ << "warning: " << common_.input << ": points were not in canonical order\n";
    input_label_ = common_.input;
    return std::move(parsed.set);
  }
  if (!common_.set.empty()) {
    auto pts = parse_vectors(common_.set);
    if (pts.empty()) fail(Errc::EmptyInput, "--set is empty");
    Coord side = common_.side;
    if (side == 0) {
      for (const auto& q : pts) {
        for (auto x : q.coords()) side = std::max(side, x);
      }
    }
    const std::size_t dim = pts.front().dim();
    return PointSet(dim, side, std::move(pts));
  }
  if (allow_grid) return PointSet::full_grid(p_.d, p_.n);
  fail(Errc::EmptyInput, "give --input or --set");
}

Json Runner::manifest(const std::string& name, const CLI::App& sub, double ms) const {
  Json params = Json::object();
  for (const auto* opt : sub.get_options()) {
    const std::string key = opt->get_single_name();
    if (key.empty() || key == "help") continue;
    const auto& res = opt->results();
    if (!res.empty()) {
      std::string joined;
      for (const auto& x : res) joined += (joined.empty() ? "" : ",") + x;
      params[key] = joined;
    } else if (!opt->get_default_str().empty()) {
      params[key] = opt->get_default_str();
    }
  }
  Json m = Json::object();
  m["subcommand"] = name;
  m["params"] = params;
  m["argv"] = args_;
  m["seed"] = common_.seed;
  m["threads"] = common_.threads;
  m["version"] = kVersion;
  m["input"] = input_label_;
  m["output"] = common_.out;
  m["duration_ms"] = static_cast<std::int64_t>(ms);
  return m;
}

void Runner::emit(const std::string& name, const CLI::App& sub, Outcome& outcome, double ms) {
  Json report = Json::object();
  report["schema"] = 1;
  report["subcommand"] = name;
  for (auto& [key, value] : outcome.report.items()) report[key] = value;
  report["manifest"] = manifest(name, sub, ms);

  std::string text;
  if (common_.format == "csv") {
    Table table;
    if (outcome.table) {
      table = *outcome.table;
    } else {
      table.columns = {"field", "value"};
      for (auto& [key, value] : outcome.report.items()) {
        if (!value.is_structured()) table.rows.push_back({key, json_cell(value)});
      }
    }
    std::ostringstream csv;
    for (std::size_t i = 0; i < table.columns.size(); ++i) csv << (i ? "," : "") << table.columns[i];
    csv << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
      csv << '\n';
    }
    text = csv.str();
  } else {
    text = report.dump(2) + "\n";
  }
  if (common_.out.empty()) {
    out_ << text;
  } else {
    std::ofstream f(common_.out, std::ios::binary);
    if (!f) fail(Errc::ParseError, "cannot write " + common_.out);
    f << text;
  }
  if (outcome.points && !common_.points_out.empty()) write_point_set(common_.points_out, *outcome.points);
}

Outcome Runner::census_cmd() {
  const PointSet V = load_set(true);
  CensusOptions opt;
  opt.budget = common_.budget;
  opt.threads = common_.threads;
  opt.mode = p_.mode == "pair" ? CensusMode::PairBased
             : p_.mode == "combined" ? CensusMode::Combined
                                     : CensusMode::Exhaustive;
  const CensusReport rep = census(V, p_.k, opt);
  Outcome o;
  auto opt_num = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  o.report["n"] = V.side();
  o.report["d"] = V.dim();
  o.report["k"] = p_.k;
  o.report["r"] = rep.r;
  o.report["vertex_count"] = rep.vertex_count;
  o.report["colliding_pairs"] = opt_num(rep.colliding_pairs);
  o.report["good"] = opt_num(rep.good_pairs);
  o.report["bad"] = opt_num(rep.bad_pairs);
  o.report["pairwise_lower_bound"] = opt_num(rep.pairwise_lower_bound);
  o.report["nonempty_buckets"] = opt_num(rep.nonempty_buckets);
  o.report["jensen_holds"] = opt_num(rep.jensen_holds);
  o.report["nondegenerate"] = opt_num(rep.nondegenerate_tuples);
  if (p_.profile) {
    const DegreeProfile prof = degree_profile(V, p_.k, opt);
    Json dp = Json::object();
    for (std::size_t l = 2; l <= p_.k + 2; ++l) dp[std::to_string(l)] = prof.at(l);
    o.report["delta_profile"] = dp;
  }
  Table t;
  t.columns = {"n", "d", "k", "r", "vertex_count", "colliding_pairs", "good", "bad", "pairwise_lower_bound",
               "nondegenerate"};
  std::vector<std::string> row;
  for (const auto& c : t.columns) {
    const Json& v = o.report[c];
    row.push_back(v.is_null() ? "" : json_cell(v));
  }
  t.rows.push_back(row);
  o.table = t;
  if (rep.jensen_holds && !*rep.jensen_holds) o.code = kVerificationFailed;
  return o;
}

Outcome Runner::degree_cmd() {
  const PointSet V = load_set(true);
  CensusOptions opt;
  opt.budget = common_.budget;
  opt.threads = common_.threads;
  const DegreeProfile prof = degree_profile(V, p_.k, opt);
  Outcome o;
  o.report["n"] = V.side();
  o.report["d"] = V.dim();
  o.report["k"] = p_.k;
  o.report["vertex_count"] = V.size();
  o.report["edges"] = prof.edges;
  Json dp = Json::object();
  for (std::size_t l = 2; l <= p_.k + 2; ++l) dp[std::to_string(l)] = prof.at(l);
  o.report["delta_profile"] = dp;
  Json bounds = Json::array();
  Table t;
  t.columns = {"ell", "delta", "bound", "holds"};
  bool all = true;
  for (const auto& b : degree_bounds(prof, V.size(), V.side())) {
    bounds.push_back({{"ell", b.ell}, {"delta", b.delta}, {"bound", to_string(b.bound)}, {"holds", b.holds}});
    t.rows.push_back({std::to_string(b.ell), std::to_string(b.delta), to_string(b.bound), b.holds ? "true" : "false"});
    all = all && b.holds;
  }
  o.report["bounds"] = bounds;
  o.table = t;
  if (!all) o.code = kVerificationFailed;
  return o;
}

Outcome Runner::delta_cmd() {
  const Rational tau = parse_rational(p_.tau);
  const Rational eps = parse_rational(p_.epsilon);
  DegreeProfile prof;
  std::uint64_t vertices = 0;
  Coord side = 0;
  if (!p_.deltas.empty()) {
    // "2:0,3:0,4:1"
    prof.k = p_.k;
    prof.delta.assign(p_.k + 3, 0);
    for (const auto& item : split(p_.deltas, ',')) {
      const auto kv = split(item, ':');
      if (kv.size() != 2) fail(Errc::ParseError, "--deltas entries look like ell:value");
      const auto ell = static_cast<std::size_t>(parse_coord(kv[0]));
      if (ell < 2 || ell > p_.k + 2) fail(Errc::ParseError, "--deltas index outside [2, k+2]");
      prof.delta[ell] = static_cast<std::uint64_t>(parse_coord(kv[1]));
    }
    prof.edges = p_.edges;
    vertices = p_.vertices;
  } else {
    const PointSet V = load_set(true);
    CensusOptions opt;
    opt.budget = common_.budget;
    opt.threads = common_.threads;
    prof = degree_profile(V, p_.k, opt);
    vertices = V.size();
    side = V.side();
  }
  Outcome o;
  o.report["k"] = prof.k;
  o.report["vertex_count"] = vertices;
  o.report["edges"] = prof.edges;
  o.report["tau"] = to_string(tau);
  Json dp = Json::object();
  for (std::size_t l = 2; l <= prof.k + 2; ++l) dp[std::to_string(l)] = prof.at(l);
  o.report["delta_profile"] = dp;
  o.report["delta_h_tau"] = to_string(compute_delta(prof, vertices, prof.edges, tau));
  if (side > 0) {
    const ContainerParams cp = container_params(prof, vertices, side, tau, eps);
    o.report["epsilon"] = to_string(eps);
    o.report["threshold"] = to_string(cp.threshold);
    o.report["ratio"] = to_string(cp.ratio);
  }
  return o;
}

Outcome Runner::search_cmd() {
  SearchConfig cfg;
  cfg.d = p_.d;
  cfg.k = p_.k;
  cfg.r = p_.r == 0 ? p_.k + 2 : p_.r;
  cfg.n = p_.n;
  cfg.node_budget = common_.budget;
  cfg.use_symmetry = p_.symmetry == "on";
  cfg.seed = common_.seed;
  const SearchResult res = max_grid_set(cfg);
  Outcome o;
  o.report["d"] = cfg.d;
  o.report["k"] = cfg.k;
  o.report["r"] = cfg.r;
  o.report["n"] = cfg.n;
  o.report["best_size"] = res.best_set.size();
  o.report["optimal"] = res.optimal;
  o.report["partial"] = !res.optimal;
  o.report["nodes"] = res.nodes;
  o.report["symmetry_group_order"] = res.symmetry_group_order;
  o.report["covering_bound"] =
      to_string(BigInt(cfg.r - 1) * pow(BigInt(cfg.n), static_cast<unsigned>(cfg.d - cfg.k)));
  o.report["points"] = points_json(res.best_set.points());
  o.points = res.best_set;
  if (!res.optimal) o.code = kBudgetExhausted;
  return o;
}

Outcome Runner::gp_subset_cmd() {
  const PointSet V = load_set(false);
  const SearchResult res = max_general_position_subset(V, common_.budget, p_.symmetry == "on", common_.seed);
  Outcome o;
  o.report["d"] = V.dim();
  o.report["n"] = V.side();
  o.report["input_size"] = V.size();
  o.report["best_size"] = res.best_set.size();
  o.report["optimal"] = res.optimal;
  o.report["partial"] = !res.optimal;
  o.report["nodes"] = res.nodes;
  o.report["points"] = points_json(res.best_set.points());
  o.points = res.best_set;
  if (!res.optimal) o.code = kBudgetExhausted;
  return o;
}

Outcome Runner::greedy_cmd() {
  const PointSet V = load_set(false);
  const GreedyResult res = greedy_general_position(
      V, p_.s, p_.order == "shuffled" ? GreedyOrder::Shuffled : GreedyOrder::Lexicographic, common_.seed,
      common_.budget);
  Outcome o;
  o.report["d"] = V.dim();
  o.report["s"] = p_.s;
  o.report["input_size"] = V.size();
  o.report["subset_size"] = res.subset.size();
  o.report["certificate"] = {{"lhs", to_string(res.lhs)}, {"rhs", res.input_size}, {"holds", res.holds}};
  o.report["points"] = points_json(res.subset.points());
  o.points = res.subset;
  return o;
}

Outcome Runner::moment_cmd() {
  const PointSet curve = moment_curve(p_.d, p_.p);
  Outcome o;
  o.report["d"] = p_.d;
  o.report["p"] = p_.p;
  o.report["size"] = curve.size();
  const auto bad = find_flat_tuple(curve, p_.d - 1, p_.d + 1, common_.budget);
  o.report["general_position"] = !bad.has_value();
  if (bad) o.report["witness"] = points_json(*bad);
  o.report["points"] = points_json(curve.points());
  o.points = curve;
  if (bad) o.code = kVerificationFailed;
  return o;
}

Outcome Runner::deletion_cmd() {
  DeletionConfig cfg;
  cfg.d = p_.d;
  cfg.r = p_.r == 0 ? 1 : p_.r;
  cfg.s = p_.s;
  cfg.n = p_.n;
  if (p_.prob != "auto") cfg.p = parse_rational(p_.prob);
  cfg.c6_mode = p_.c6 == "estimate" ? C6Mode::Estimate : C6Mode::Exact;
  cfg.seed = common_.seed;
  cfg.trials = p_.trials;
  cfg.budget = common_.budget;
  cfg.threads = common_.threads;
  const DeletionSummary sum = deletion_construct(cfg);
  for (const auto& w : sum.warnings) err_ << "warning: " << w << '\n';
  Outcome o;
  o.report["d"] = cfg.d;
  o.report["r"] = cfg.r;
  o.report["s"] = cfg.s;
  o.report["n"] = cfg.n;
  o.report["trials"] = cfg.trials;
  o.report["p"] = to_string(sum.p);
  o.report["p_auto"] = sum.p_auto;
  o.report["c6_mode"] = p_.c6;
  o.report["c6_side"] = sum.c6_side;
  o.report["flat_tuples"] = to_string(sum.flat_tuples);
  o.report["c6"] = to_string(sum.c6);
  o.report["expected_size_bound"] = to_string(sum.expected_size_bound);
  o.report["half_expected"] = to_string(sum.half_expected);
  o.report["mean_sampled"] = to_string(sum.mean_sampled);
  o.report["var_sampled"] = to_string(sum.var_sampled);
  o.report["mean_final"] = to_string(sum.mean_final);
  o.report["var_final"] = to_string(sum.var_final);
  o.report["mean_meets_half_within_3se"] =
      within_standard_errors(sum.mean_final, sum.var_final, cfg.trials, sum.half_expected, 3);
  o.report["warnings"] = sum.warnings;
  Json trials = Json::array();
  Table t;
  t.columns = {"trial", "sampled", "violations", "deleted", "final"};
  for (const auto& rep : sum.reports) {
    trials.push_back({{"trial", rep.trial},
                      {"sampled", rep.sampled_size},
                      {"violations", rep.violations_found},
                      {"deleted", rep.deleted},
                      {"final", rep.final_size}});
    t.rows.push_back({std::to_string(rep.trial), std::to_string(rep.sampled_size),
                      std::to_string(rep.violations_found), std::to_string(rep.deleted),
                      std::to_string(rep.final_size)});
  }
  o.report["per_trial"] = trials;
  o.table = t;
  if (!sum.reports.empty()) o.points = sum.reports.front().output;
  return o;
}

Outcome Runner::bg_cmd() {
  const PointSet V = load_set(false);
  const BgResult res = bg_check(V, p_.g, p_.m, common_.budget);
  Outcome o;
  o.report["g"] = p_.g;
  o.report["m"] = p_.m;
  o.report["size"] = V.size();
  o.report["holds"] = res.holds;
  if (!res.holds) o.report["witness"] = {{"coeffs", res.coeffs}, {"values", points_json(res.values)}};
  if (!res.holds) o.code = kVerificationFailed;
  return o;
}

Outcome Runner::eq5_cmd() {
  const PointSet V = load_set(false);
  std::optional<BigInt> override_bound;
  if (!p_.bound.empty()) override_bound = BigInt(parse_coord(p_.bound));
  const std::size_t r = p_.r == 0 ? 1 : p_.r;
  const Eq5Result res = verify_eq5(V, r, common_.budget, override_bound);
  Outcome o;
  o.report["r"] = r;
  o.report["d"] = V.dim();
  o.report["n"] = V.side();
  o.report["size"] = V.size();
  o.report["coefficient_bound"] = to_string(res.bound);
  o.report["bound_overridden"] = override_bound.has_value();
  o.report["holds"] = res.holds;
  if (res.witness) {
    o.report["witness"] = {
        {"c1", res.witness->c1}, {"c2", res.witness->c2}, {"values", points_json(res.witness->values)}};
    o.code = kVerificationFailed;
  }
  return o;
}

Outcome Runner::phi_cmd() {
  const auto U = parse_vectors(p_.u_set);
  const auto T = parse_vectors(p_.t_set.empty() ? p_.u_set : p_.t_set);
  const PhiTable table = phi(U, T);
  Outcome o;
  Json entries = Json::array();
  Table t;
  t.columns = {"x", "count"};
  for (const auto& [x, c] : table.counts) {
    entries.push_back({{"x", point_json(x)}, {"count", c}});
    std::string key;
    for (auto v : x.coords()) key += (key.empty() ? "" : ":") + std::to_string(v);
    t.rows.push_back({key, std::to_string(c)});
  }
  o.report["total"] = table.total();
  o.report["entries"] = entries;
  o.table = t;
  return o;
}

Outcome Runner::cs_cmd() {
  const auto U = parse_vectors(p_.u_set);
  const auto T = parse_vectors(p_.t_set.empty() ? p_.u_set : p_.t_set);
  const CsResult res = check_cs(U, T);
  Outcome o;
  o.report["sumset_size"] = res.sumset_size;
  o.report["lhs"] = to_string(res.lhs);
  o.report["rhs"] = to_string(res.rhs);
  o.report["holds"] = res.holds;
  if (!res.holds) o.code = kVerificationFailed;
  return o;
}

Outcome Runner::trend_cmd() {
  std::vector<Coord> sides;
  for (const auto& t : split(p_.n_list, ',')) sides.push_back(parse_coord(t));
  CensusOptions opt;
  opt.budget = common_.budget;
  opt.threads = common_.threads;
  const TrendTable table = supersaturation_trend(p_.k, p_.d, sides, opt);
  Outcome o;
  o.report["k"] = table.k;
  o.report["d"] = table.dim;
  o.report["reference_exponent"] = table.reference_exponent;
  Json rows = Json::array();
  Table t;
  t.columns = {"n", "count"};
  for (const auto& row : table.rows) {
    rows.push_back({{"n", row.n}, {"count", row.count}});
    t.rows.push_back({std::to_string(row.n), std::to_string(row.count)});
  }
  o.report["rows"] = rows;
  if (table.slope) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << *table.slope;
    o.report["slope"] = s.str();
  } else {
    o.report["slope"] = nullptr;
  }
  o.table = t;
  return o;
}

Outcome Runner::bounds_cmd() {
  Outcome o;
  o.report["d"] = p_.d;
  auto mf_json = [](const MultifoldBound& b) {
    return Json{{"r", b.r},
                {"exponent", to_string(b.exponent)},
                {"m_exponent", to_string(b.m_exponent)},
                {"l_exponent", to_string(b.l_exponent)}};
  };
  if (p_.r != 0) {
    o.report["multifold"] = mf_json(multifold_bound(p_.d, p_.r));
    return o;
  }
  const FlatBound fb = flat_bound(p_.d, p_.k);
  o.report["k"] = p_.k;
  o.report["r"] = fb.multifold.r;
  o.report["exponent"] = to_string(fb.multifold.exponent);
  o.report["lefmann_exponent"] = to_string(fb.lefmann_exponent);
  o.report["trivial_exponent"] = to_string(fb.trivial_exponent);
  o.report["improves_lefmann"] = fb.improves;
  o.report["multifold"] = mf_json(fb.multifold);
  return o;
}

int Runner::selftest() {
  const auto results = run_selftest(common_.seed);
  Json report = Json::object();
  report["schema"] = 1;
  report["subcommand"] = "selftest";
  Json checks = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    ok = ok && r.passed;
  }
  report["checks"] = checks;
  report["passed"] = ok;
  out_ << report.dump(2) << '\n';
  return ok ? kOk : kError;
}

int Runner::rerun() {
  std::ifstream in(p_.manifest, std::ios::binary);
  if (!in) fail(Errc::ParseError, "cannot open " + p_.manifest);
  Json report = Json::parse(in);
  const auto argv = report.at("manifest").at("argv").get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "rerun") fail(Errc::InvalidConfig, "manifest of a rerun");
  return Runner(argv, out_, err_).run();
}

int Runner::run() {
  CLI::App app{"Exact point-set geometry on integer grids", "gridpos"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kVersion));
  bool selftest_flag = false;
  app.add_flag("--selftest", selftest_flag, "run the built-in invariant suite");
  app.add_option("--seed", common_.seed, "seed for --selftest");
  common_.budget = default_budget();

  std::vector<std::pair<CLI::App*, std::function<Outcome()>>> commands;
  auto reg = [&](CLI::App* sub, std::function<Outcome()> fn) { commands.emplace_back(sub, std::move(fn)); };
  auto grid_opts = [&](CLI::App* sub) {
    sub->add_option("--d", p_.d, "dimension")->check(CLI::Range(1, 8));
    sub->add_option("--n", p_.n, "grid side")->check(CLI::Range(1, 1 << 20));
  };

  auto* census = add(app, "census", "count flat-incident (k+2)-tuples", true);
  grid_opts(census);
  census->add_option("--k", p_.k, "flat dimension")->check(CLI::Range(1, 16));
  census->add_option("--mode", p_.mode, "pair, exhaustive or combined")
      ->check(CLI::IsMember({"pair", "exhaustive", "combined"}));
  census->add_flag("--profile", p_.profile, "include the degree profile");
  reg(census, [this] { return census_cmd(); });

  auto* degree = add(app, "degree", "degree profile of the tuple hypergraph", true);
  grid_opts(degree);
  degree->add_option("--k", p_.k, "flat dimension")->check(CLI::Range(1, 16));
  reg(degree, [this] { return degree_cmd(); });

  auto* delta = add(app, "delta", "container functional Delta(H, tau)", true);
  grid_opts(delta);
  delta->add_option("--k", p_.k, "flat dimension")->check(CLI::Range(1, 16));
  delta->add_option("--tau", p_.tau, "tau in (0, 1/2]");
  delta->add_option("--epsilon", p_.epsilon, "epsilon in (0, 1/2)");
  delta->add_option("--deltas", p_.deltas, "explicit profile ell:value,...");
  delta->add_option("--vertices", p_.vertices, "|V| with --deltas");
  delta->add_option("--edges", p_.edges, "|E| with --deltas");
  reg(delta, [this] { return delta_cmd(); });

  auto* search = add(app, "search", "largest grid set with no r points on a k-flat", false);
  grid_opts(search);
  search->add_option("--k", p_.k, "flat dimension")->check(CLI::Range(1, 16));
  search->add_option("--r", p_.r, "forbidden count (default k+2)");
  search->add_option("--symmetry", p_.symmetry, "on or off")->check(CLI::IsMember({"on", "off"}));
  search->add_option("--points-out", common_.points_out, "write the best set here");
  reg(search, [this] { return search_cmd(); });

  auto* gp = add(app, "gp-subset", "largest general-position subset", true);
  gp->add_option("--symmetry", p_.symmetry, "on or off")->check(CLI::IsMember({"on", "off"}));
  gp->add_option("--points-out", common_.points_out, "write the subset here");
  reg(gp, [this] { return gp_subset_cmd(); });

  auto* greedy = add(app, "greedy-gp", "greedy general-position subset with certificate", true);
  greedy->add_option("--s", p_.s, "input has no d+s points on a hyperplane")->check(CLI::Range(1, 64));
  greedy->add_option("--order", p_.order, "lex or shuffled")->check(CLI::IsMember({"lex", "shuffled"}));
  greedy->add_option("--points-out", common_.points_out, "write the subset here");
  reg(greedy, [this] { return greedy_cmd(); });

  auto* moment = add(app, "moment-curve", "modular moment curve", false);
  moment->add_option("--d", p_.d, "dimension")->check(CLI::Range(1, 8));
  moment->add_option("--p", p_.p, "prime modulus");
  moment->add_option("--points-out", common_.points_out, "write the curve here");
  reg(moment, [this] { return moment_cmd(); });

  auto* deletion = add(app, "deletion", "random sampling plus deletion", false);
  grid_opts(deletion);
  deletion->add_option("--r", p_.r, "flat dimension (default 1)");
  deletion->add_option("--s", p_.s, "r+s points forbidden on an r-flat");
  deletion->add_option("--p", p_.prob, "probability a/b or auto");
  deletion->add_option("--c6", p_.c6, "exact or estimate")->check(CLI::IsMember({"exact", "estimate"}));
  deletion->add_option("--trials", p_.trials, "independent trials")->check(CLI::PositiveNumber);
  deletion->add_option("--points-out", common_.points_out, "write trial 0's output here");
  reg(deletion, [this] { return deletion_cmd(); });

  auto* bg = add(app, "bg-verify", "m-fold B_g test", true);
  bg->add_option("--g", p_.g, "number of summands")->check(CLI::Range(1, 8));
  bg->add_option("--m", p_.m, "coefficient range [m]")->check(CLI::Range(1, 64));
  reg(bg, [this] { return bg_cmd(); });

  auto* eq5 = add(app, "eq5-verify", "only trivial solutions of the c1/c2 equation family", true);
  eq5->add_option("--r", p_.r, "block size (default 1)");
  eq5->add_option("--bound", p_.bound, "override the coefficient bound M");
  reg(eq5, [this] { return eq5_cmd(); });

  auto* phi_sub = add(app, "phi", "difference-count table Phi_{U-T}", false);
  phi_sub->add_option("--u", p_.u_set, "U, e.g. 0,1 or 0:0,1:2")->required();
  phi_sub->add_option("--t", p_.t_set, "T (default U)");
  reg(phi_sub, [this] { return phi_cmd(); });

  auto* cs = add(app, "cs-check", "Cauchy-Schwarz sumset inequality", false);
  cs->add_option("--u", p_.u_set, "U")->required();
  cs->add_option("--t", p_.t_set, "T (default U)");
  reg(cs, [this] { return cs_cmd(); });

  auto* trend = add(app, "trend", "non-degenerate counts on full grids", false);
  trend->add_option("--k", p_.k, "even flat dimension")->check(CLI::Range(1, 16));
  trend->add_option("--d", p_.d, "dimension")->check(CLI::Range(1, 8));
  trend->add_option("--n-list", p_.n_list, "comma-separated sides")->required();
  reg(trend, [this] { return trend_cmd(); });

  auto* bounds = add(app, "bounds", "exponent bookkeeping for the multifold bound", false);
  bounds->add_option("--d", p_.d, "dimension")->check(CLI::Range(1, 1 << 20));
  bounds->add_option("--k", p_.k, "flat dimension (r = floor((k+2)/4))");
  bounds->add_option("--r", p_.r, "use this r directly");
  reg(bounds, [this] { return bounds_cmd(); });

  auto* rerun_sub = app.add_subcommand("rerun", "re-execute the command recorded in a report");
  rerun_sub->add_option("report", p_.manifest, "report JSON with a manifest")->required();

  app.require_subcommand(0, 1);
  try {
    std::vector<std::string> reversed(args_.rbegin(), args_.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out_ << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out_ << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (selftest_flag) return selftest();
    if (rerun_sub->parsed()) return rerun();
    for (auto& [sub, fn] : commands) {
      if (!sub->parsed()) continue;
      const auto start = std::chrono::steady_clock::now();
      Outcome outcome = fn();
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      emit(sub->get_name(), *sub, outcome, ms);
      return outcome.code;
    }
    err_ << app.help();
    return kUsage;
  } catch (const Error& e) {
    err_ << "error: " << e.what() << '\n';
    return e.code() == Errc::BudgetExceeded ? kBudgetExhausted : kError;
  } catch (const std::exception& e) {
    err_ << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(args, out, err).run();
}

}  // namespace gridpos::cli
