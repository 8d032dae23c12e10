#include "pathscape/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>

#include "pathscape/cascade.hpp"
#include "pathscape/errors.hpp"
#include "pathscape/hypercube.hpp"
#include "pathscape/moments.hpp"
#include "pathscape/recursion.hpp"
#include "pathscape/rng.hpp"
#include "pathscape/stats.hpp"
#include "pathscape/tree.hpp"

namespace pathscape {
namespace {

// Independent stream j of criterion c.
std::uint64_t stream(const VerifyOptions& o, int c, std::uint64_t j) {
  return derive_seed(derive_seed(o.seed, static_cast<std::uint64_t>(c)), j);
}

std::vector<double> as_double(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

std::vector<double> squares(const std::vector<std::uint64_t>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](std::uint64_t t) { return double(t) * double(t); });
  return out;
}

double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

struct Output {
  bool passed = true;
  Json stats = Json::object();
};

// --- 1, 2: oracle equivalence ----------------------------------------------

Output c1(const VerifyOptions& o) {
  Output out;
  std::uint64_t checked = 0, mismatches = 0, exists_mismatches = 0;
  for (int L = 2; L <= 7; ++L) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto land = generate_hypercube(L, 0.0, stream(o, 1, L * 1000 + s));
      const auto dp = count_open_paths(land);
      mismatches += dp != enumerate_paths_oracle(land);
      exists_mismatches += path_exists(land) != (dp >= 1);
      ++checked;
    }
  }
  out.stats = {{"landscapes", checked}, {"count_mismatches", mismatches}, {"exists_mismatches", exists_mismatches}};
  out.passed = mismatches == 0 && exists_mismatches == 0;
  return out;
}

Output c2(const VerifyOptions& o) {
  Output out;
  std::uint64_t checked = 0, mismatches = 0, total_theta = 0;
  for (int L = 2; L <= 7; ++L) {
    for (std::uint64_t s = 0; s < 100; ++s) {
      const TreeRun run(TreeParams{L, 0.0, stream(o, 2, L * 1000 + s)});
      const auto dfs = sample_theta_tree(run);
      mismatches += dfs != enumerate_tree_paths_oracle(run);
      total_theta += dfs;
      ++checked;
    }
  }
  out.stats = {{"realizations", checked}, {"mismatches", mismatches}, {"sum_theta", total_theta}};
  out.passed = mismatches == 0;
  return out;
}

// --- 3, 4: moments by Monte Carlo ------------------------------------------

Output c3(const VerifyOptions& o) {
  Output out;
  constexpr std::uint64_t n = 100000;
  const auto tree = moment_summary(as_double(sample_theta_tree_mc(8, 0.2, n, stream(o, 3, 0), kDefaultNodeBudget, o.threads)));
  const auto cube = moment_summary(as_double(sample_theta_hypercube(12, 0.1, n, stream(o, 3, 1), o.threads)));
  const double tree_exact = expected_paths(8, 0.2), cube_exact = expected_paths(12, 0.1);
  const bool ok_tree = within_se(tree.mean, tree_exact, tree.se_mean);
  const bool ok_cube = within_se(cube.mean, cube_exact, cube.se_mean);
  out.stats = {{"tree_mean", tree.mean}, {"tree_se", tree.se_mean}, {"tree_exact", tree_exact},
               {"cube_mean", cube.mean}, {"cube_se", cube.se_mean}, {"cube_exact", cube_exact}};
  out.passed = ok_tree && ok_cube;
  return out;
}

Output c4(const VerifyOptions& o) {
  Output out;
  constexpr std::uint64_t n = 100000;
  const auto theta = sample_theta_tree_mc(8, 0.2, n, stream(o, 4, 0), kDefaultNodeBudget, o.threads);
  const auto sq = moment_summary(squares(theta));
  const double exact = second_moment_tree(8, 0.2);
  out.stats = {{"mean_theta_sq", sq.mean}, {"se", sq.se_mean}, {"exact", exact}};
  out.passed = within_se(sq.mean, exact, sq.se_mean);
  return out;
}

// --- 5, 6, 7: closed forms -------------------------------------------------

Output c5(const VerifyOptions&) {
  Output out;
  constexpr int L = 1000000;
  const double vstar = var_star_tree(L) / L;
  bool ok = std::fabs(vstar - 1.0) <= 1e-3;
  out.stats["var_star_over_L"] = vstar;
  for (double X : {0.0, 1.0}) {
    const auto s = scaled_limits(L, X, Regime::Linear);
    out.stats["var_over_L2_X" + std::to_string(int(X))] = s.scaled_var;
    ok = ok && std::fabs(s.scaled_var - s.limit_var) <= 1e-3;
  }
  const auto lg = scaled_limits(L, 0.0, Regime::Log);
  out.stats["var_log_regime_X0"] = lg.scaled_var;
  ok = ok && std::fabs(lg.scaled_var - lg.limit_var) <= 0.05;
  Json cond = Json::array();
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double v = cond_var_tree(L, 0.0, k) / (double(L) * L);
    cond.push_back(v);
    worst = std::max(worst, std::fabs(v - std::ldexp(1.0, -k)));
  }
  out.stats["cond_var_over_L2"] = cond;
  out.stats["cond_var_worst_dev"] = worst;
  out.passed = ok && worst <= 1e-3;
  return out;
}

Output c6(const VerifyOptions&) {
  Output out;
  bool ends = true, near_top = true;
  Json rows = Json::array();
  for (int L : {12, 100, 10000}) {
    const double top = a_coeff(L, L - 2);
    const double third = a_coeff(L, L - 3);
    const double e_top = rel_err(top, 2.0);
    const double e_24L = rel_err(third, 24.0 / L);
    const double e_24L1 = rel_err(third, 24.0 / (L + 1));
    ends = ends && e_top <= 1e-10;
    near_top = near_top && e_24L <= 1e-10;
    rows.push_back({{"L", L}, {"rel_err_a_Lm2_vs_2", e_top}, {"rel_err_a_Lm3_vs_24_over_L", e_24L},
                    {"rel_err_a_Lm3_vs_24_over_Lp1", e_24L1}});
  }
  const auto la = log_a_row(100);
  double min_diff = INFINITY;
  for (int q = 2; q <= 97; ++q) min_diff = std::min(min_diff, la[q] - 2.0 * la[q - 1] + la[q - 2]);
  const bool convex = min_diff >= 0.0;
  bool bound = true;
  Json bounds = Json::array();
  for (int L : {100, 10000, 1000000}) {
    const auto r = a_bound_check(L);
    bound = bound && r.holds;
    bounds.push_back({{"L", L}, {"q0", r.q0}, {"holds", r.holds}, {"first_violation", r.first_violation},
                      {"worst_log_excess", r.worst_log_excess}});
  }
  const auto scan = a_bound_scan(12, 2000);
  out.stats = {{"ends", rows},
               {"a_Lm2_ok", ends},
               {"a_Lm3_is_24_over_L", near_top},
               {"log_convexity_min_second_difference", min_diff},
               {"bound", bounds},
               {"bound_scan", {{"from", scan.from}, {"to", scan.to}, {"violations", scan.violations},
                               {"smallest_violation", scan.smallest_violation},
                               {"largest_violation", scan.largest_violation}}}};
  out.passed = ends && near_top && convex && bound;
  return out;
}

// Counts |I_{p,q}| at dimension L by classifying every path against the
// reference path that flips bits 0, 1, …, L-1 in order.
std::map<std::pair<int, int>, std::uint64_t> pair_classes(int L) {
  std::map<std::pair<int, int>, std::uint64_t> count;
  std::vector<int> perm(L);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int p = 0;
    while (p < L && perm[p] == p) ++p;
    if (p == L) continue;  // the reference path itself
    int q = 0;
    while (perm[L - 1 - q] == L - 1 - q) ++q;
    // node after j steps is shared iff the first j flips are exactly 0..j-1
    bool disjoint = true;
    int running_max = -1;
    for (int j = 1; j <= L - 1; ++j) {
      running_max = std::max(running_max, perm[j - 1]);
      if (j > p && j < L - q && running_max == j - 1) disjoint = false;
    }
    if (disjoint) ++count[{p, q}];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Output c7(const VerifyOptions&) {
  Output out;
  const std::uint64_t expected_b[] = {1, 1, 3, 13, 71};
  bool b_ok = true;
  Json bs = Json::array();
  for (int n = 1; n <= 5; ++n) {
    const auto b = indecomposable_count(n);
    bs.push_back(b);
    b_ok = b_ok && b == expected_b[n - 1];
  }
  constexpr int L = 6;
  const auto classes = pair_classes(L);
  bool classes_ok = true;
  int checked = 0;
  for (int p = 0; p <= L - 2; ++p) {
    for (int q = 0; p + q <= L - 2; ++q) {
      const auto it = classes.find({p, q});
      const std::uint64_t got = it == classes.end() ? 0 : it->second;
      classes_ok = classes_ok && got == indecomposable_count(L - p - q);
      ++checked;
    }
  }
  out.stats = {{"B", bs}, {"classes_checked", checked}, {"classes_match", classes_ok}};
  out.passed = b_ok && classes_ok;
  return out;
}

// --- 8, 10: generating function and F_k ------------------------------------

Output c8(const VerifyOptions&) {
  Output out;
  constexpr int L = 2000;
  double worst_err = 0.0, worst_shift = 0.0;
  Json vals = Json::array();
  for (double mu : {0.5, 1.0, 2.0}) {
    const auto coarse = tree_gf(mu / L, L, 1 << 13);
    const auto fine = tree_gf(mu / L, L, 1 << 14);
    for (double X : {0.0, 1.0}) {
      const double g = coarse.at(X / L);
      const double limit = 1.0 / (1.0 + mu * std::exp(-X));
      worst_err = std::max(worst_err, std::fabs(g - limit));
      worst_shift = std::max(worst_shift, std::fabs(g - fine.at(X / L)));
      vals.push_back({{"mu", mu}, {"X", X}, {"G", g}, {"limit", limit}});
    }
  }
  out.stats = {{"values", vals}, {"worst_error", worst_err}, {"worst_doubling_shift", worst_shift}};
  out.passed = worst_err < 0.01 && worst_shift < 2e-3;
  return out;
}

Output c10(const VerifyOptions&) {
  Output out;
  const auto f20 = fk_iterate(20, 10.0, 1 << 14);
  double sup = 0.0;
  for (std::size_t i = 0; i < f20.values.size(); ++i)
    sup = std::max(sup, std::fabs(f20.values[i] - 1.0 / (1.0 + f20.node(i))));
  const auto rep = delta_bound_check(12, 10.0, 1 << 14);
  Json levels = Json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"k", l.k}, {"min", l.min}, {"max", l.max}, {"at_one", l.at_one}, {"route_gap", l.route_gap}});
  out.stats = {{"sup_F20_error", sup}, {"M", rep.M}, {"z_at_M", rep.z_at_M}, {"violations", rep.violations.size()},
               {"levels", levels}};
  out.passed = sup < 1e-5 && rep.ok();
  return out;
}

// --- 9: existence -----------------------------------------------------------

Output c9(const VerifyOptions& o) {
  Output out;
  bool bounds_ok = true;
  Json rows = Json::array();
  double ratio = 0.0;
  for (int L : {10, 100, 1000, 10000}) {
    const int grid = L >= 10000 ? (1 << 16) : (1 << 14);
    const double ps = p_star(L, grid);
    const double ub = pstar_upper_bound(L);
    bounds_ok = bounds_ok && ps <= ub;
    if (L == 10000) ratio = ps * L / std::log(double(L));
    rows.push_back({{"L", L}, {"grid", grid}, {"p_star", ps}, {"upper_bound", ub}});
  }
  // grid-doubling self-check at the largest L
  const double half_grid = p_star(10000, 1 << 15);
  const double full_grid = rows.back()["p_star"].get<double>();
  const double shift = std::fabs(full_grid - half_grid) / full_grid;
  const double p14 = existence_prob(14, 1 << 12).values.values[0];
  constexpr std::uint64_t n = 20000;
  const auto mc = tree_existence_mc(14, 0.0, n, stream(o, 9, 0), kDefaultNodeBudget, o.threads);
  const bool mc_ok = mc.budget_hits == 0 && within_se(mc.estimate, p14, mc.std_error);
  out.stats = {{"p_star", rows},
               {"p_star_ratio_L1e4", ratio},
               {"p_star_L1e4_relative_doubling_shift", shift},
               {"existence_L14_recursion", p14},
               {"existence_L14_mc", mc.estimate},
               {"existence_L14_se", mc.std_error},
               {"budget_hits", mc.budget_hits}};
  out.passed = ratio >= 0.85 && ratio <= 1.15 && bounds_ok && mc_ok && shift < 0.01;
  return out;
}

// --- 11: cascade -------------------------------------------------------------

Output c11(const VerifyOptions& o) {
  Output out;
  CascadeParams p3{3, 1e-8, stream(o, 11, 0), 100000};
  const auto s3 = sample_cascades(p3, o.threads);
  std::vector<double> lap(s3.size());
  double bias = 0.0;
  for (std::size_t i = 0; i < s3.size(); ++i) {
    lap[i] = std::exp(-s3[i].y);
    bias += s3[i].bias_bound;
  }
  bias /= double(s3.size());
  const auto m = moment_summary(lap);
  const double f3 = fk_iterate(3, 2.0, 1 << 14).at(1.0);
  const bool lap_ok = std::fabs(m.mean - f3) <= 4.0 * m.se_mean + bias;

  const auto k6 = cascade_limit_check(CascadeParams{6, 1e-6, stream(o, 11, 1), 10000}, o.threads);
  const auto k2 = cascade_limit_check(CascadeParams{2, 1e-6, stream(o, 11, 2), 10000}, o.threads);
  out.stats = {{"laplace_mean", m.mean},   {"laplace_se", m.se_mean}, {"F3_at_1", f3},
               {"mean_bias_k3", bias},     {"ks_k6", k6.ks},          {"ks_k2", k2.ks},
               {"mean_bias_k6", k6.mean_bias}, {"gap_bound_k6", k6.gap_bound}, {"M", k6.M}};
  out.passed = lap_ok && k6.ks < 0.02 && k6.ks < k2.ks;
  return out;
}

// --- 12: hypercube limit law --------------------------------------------------

Output c12(const VerifyOptions& o) {
  Output out;
  constexpr std::uint64_t n = 10000;
  constexpr double X = 1.0;
  auto ks_for = [&](int L, const std::vector<std::uint64_t>& theta) {
    std::vector<double> z(theta.size());
    const double scale = L * std::exp(-X);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = double(theta[i]) / scale;
    return ks_statistic(Sample(std::move(z)), ReferenceLaw::product_exponential(1.0));
  };
  const auto t16 = sample_theta_hypercube(16, X / 16, n, stream(o, 12, 0), o.threads);
  const auto t8 = sample_theta_hypercube(8, X / 8, n, stream(o, 12, 1), o.threads);
  std::vector<double> r16(t16.size());
  for (std::size_t i = 0; i < t16.size(); ++i) r16[i] = double(t16[i]) / 16.0;
  const auto m = moment_summary(r16);
  const double target = 3.0 * std::exp(-2.0 * X);
  const double ks16 = ks_for(16, t16), ks8 = ks_for(8, t8);
  const bool var_ok = std::fabs(m.variance - target) <= 0.25 * target;
  out.stats = {{"var_theta_over_L_16", m.variance}, {"var_se", m.se_variance}, {"target", target},
               {"mean_theta_over_L_16", m.mean},   {"ks_16", ks16},          {"ks_8", ks8}};
  out.passed = var_ok && ks16 < ks8 && ks16 < 0.1;
  return out;
}

struct CriterionSpec {
  int id;
  const char* title;
  double limit;
  Output (*fn)(const VerifyOptions&);
  bool stochastic;
};

const CriterionSpec kCriteria[] = {
    {1, "hypercube DP equals L! enumeration, L=2..7 x 100 seeds", 60, c1, true},
    {2, "tree pruned DFS equals L! enumeration, L=2..7 x 100 seeds", 60, c2, true},
    {3, "first moment by MC: tree (8,0.2), hypercube (12,0.1)", 300, c3, true},
    {4, "tree second moment by MC at (8,0.2)", 300, c4, true},
    {5, "closed-form variance limits at L=1e6", 60, c5, false},
    {6, "a(L,q) end values, log-convexity and bound", 10, c6, false},
    {7, "B(n) values and |I_pq| = B(L-p-q) at L=6", 60, c7, false},
    {8, "generating function at L=2000 vs 1/(1+mu e^-X)", 120, c8, false},
    {9, "existence probability: p_star scale, upper bound, MC at L=14", 300, c9, true},
    {10, "F_20 vs 1/(1+z) and delta_k envelope", 60, c10, false},
    {11, "cascade Laplace transform and exponential limit", 600, c11, true},
    {12, "hypercube variance and product-exponential law at X=1", 900, c12, true},
};

const CriterionSpec& spec_for(int id) {
  for (const auto& c : kCriteria)
    if (c.id == id) return c;
  throw DomainError("unknown criterion " + std::to_string(id));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<std::string> battery_names() { return {"oracles", "prop1", "moments", "thm1", "thm2", "thm3", "thm4", "all"}; }

std::vector<int> battery_criteria(const std::string& battery) {
  static const std::map<std::string, std::vector<int>> table = {
      {"oracles", {1, 2}}, {"prop1", {3, 4}}, {"moments", {5, 6, 7}}, {"thm1", {8, 10}},
      {"thm2", {12}},      {"thm3", {9}},     {"thm4", {11}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}}};
  const auto it = table.find(battery);
  if (it == table.end()) throw DomainError("unknown battery: " + battery);
  return it->second;
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  const CriterionSpec& c = spec_for(id);
  const auto t0 = std::chrono::steady_clock::now();
  Output o = c.fn(options);
  CriterionResult r;
  r.id = id;
  r.title = c.title;
  r.seconds = seconds_since(t0);
  r.time_limit = c.limit;
  r.stats = std::move(o.stats);
  r.passed = o.passed && r.seconds < c.limit;
  return r;
}

CriterionResult reproducibility_check(const std::vector<CriterionResult>& first, const VerifyOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyOptions again = options;
  again.threads = options.threads == 1 ? 2 : 1;
  CriterionResult r;
  r.id = 13;
  r.title = "rerun with the same seed reproduces every statistic bit for bit";
  Json compared = Json::array();
  Json differing = Json::array();
  for (const auto& prev : first) {
    if (prev.id == 13 || !spec_for(prev.id).stochastic) continue;
    const Json redo = spec_for(prev.id).fn(again).stats;
    compared.push_back(prev.id);
    if (redo.dump() != prev.stats.dump()) differing.push_back(prev.id);
  }
  r.stats = {{"compared", compared}, {"differing", differing}, {"rerun_threads", again.threads}};
  r.seconds = seconds_since(t0);
  r.passed = differing.empty() && !compared.empty();
  return r;
}

std::vector<CriterionResult> run_battery(const std::string& battery, const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  for (int id : battery_criteria(battery)) {
    if (id == 13)
      out.push_back(reproducibility_check(out, options));
    else
      out.push_back(run_criterion(id, options));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.1fs)", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + "C" + std::to_string(r.id) + " " + r.title + buf + " " +
         r.stats.dump();
}

}  // namespace pathscape
