// pathscape: command-line front end.  Every command prints JSON lines on
// stdout; --csv mirrors the same records to a file.
//
// Exit codes: 0 success, 1 failed verification or count overflow,
// 2 bad parameters, 3 search budget exhausted.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pathscape/cascade.hpp"
#include "pathscape/errors.hpp"
#include "pathscape/hypercube.hpp"
#include "pathscape/moments.hpp"
#include "pathscape/parallel.hpp"
#include "pathscape/record.hpp"
#include "pathscape/recursion.hpp"
#include "pathscape/stats.hpp"
#include "pathscape/tree.hpp"
#include "pathscape/verify.hpp"

using namespace pathscape;

namespace {

struct Options {
  int dim = 4;
  std::optional<double> x, X_scaled, logscaled;
  int k = 1;
  int q = 0;
  int p = 0;
  int n = 1;
  std::uint64_t samples = 1;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;  // 0: module default
  int grid = 1 << 13;
  double zmax = 10.0;
  double mu = 1.0;
  int levels = 0;  // 0: use --dim
  double delta = 1e-6;
  int points = 16;
  std::optional<unsigned> threads;
  std::string csv;
  bool timing = false;
  std::string battery;
};

class Emitter {
 public:
  explicit Emitter(const Options& o) : opts_(o), t0_(std::chrono::steady_clock::now()) {}

  void emit(ExperimentRecord r) {
    if (opts_.timing)
      r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::cout << r.to_json().dump() << '\n';
    std::cout.flush();
    records_.push_back(std::move(r));
  }

  void finish() const {
    if (opts_.csv.empty()) return;
    std::ofstream out(opts_.csv, std::ios::binary);
    if (!out) throw DomainError("cannot open CSV output " + opts_.csv);
    write_csv(out, records_);
  }

 private:
  const Options& opts_;
  std::chrono::steady_clock::time_point t0_;
  std::vector<ExperimentRecord> records_;
};

// Resolves the starting value from --x, --X-scaled or --logscaled and
// records which one was used.
double resolve_x(const Options& o, Json& params, int dim, bool required = true) {
  const int given = int(o.x.has_value()) + int(o.X_scaled.has_value()) + int(o.logscaled.has_value());
  require(given <= 1, "use only one of --x, --X-scaled, --logscaled");
  double x = 0.0;
  if (o.X_scaled) {
    x = scaled_origin(dim, *o.X_scaled, Regime::Linear);
    params["X_scaled"] = *o.X_scaled;
  } else if (o.logscaled) {
    x = scaled_origin(dim, *o.logscaled, Regime::Log);
    params["logscaled"] = *o.logscaled;
  } else if (o.x) {
    x = *o.x;
  } else {
    require(!required, "one of --x, --X-scaled, --logscaled is required");
  }
  require(x >= 0.0 && x <= 1.0, "starting value must lie in [0,1]");
  params["x"] = x;
  return x;
}

ExperimentRecord make(const std::string& command, Json params) {
  ExperimentRecord r;
  r.command = command;
  r.params = std::move(params);
  return r;
}

void put_summary(Json& stats, const std::vector<double>& v, const std::string& prefix = "") {
  const auto m = moment_summary(v);
  stats[prefix + "mean"] = m.mean;
  stats[prefix + "se"] = m.se_mean;
  stats[prefix + "variance"] = m.variance;
  stats[prefix + "variance_se"] = m.se_variance;
}

std::uint64_t tree_budget(const Options& o) { return o.budget ? o.budget : kDefaultNodeBudget; }

// --- hypercube ---------------------------------------------------------------

void hypercube_count(const Options& o, Emitter& out, unsigned threads) {
  Json params{{"dim", o.dim}};
  const double x = resolve_x(o, params, o.dim);
  params["samples"] = o.samples;
  auto r = make("hypercube count", params);
  r.set_stream(o.seed, o.samples);
  if (o.samples == 1) {
    r.stats["theta"] = count_open_paths(generate_hypercube(o.dim, x, o.seed));
  } else {
    std::vector<double> t;
    for (auto v : sample_theta_hypercube(o.dim, x, o.samples, o.seed, threads)) t.push_back(double(v));
    put_summary(r.stats, t);
    r.stats["expected"] = expected_paths(o.dim, x);
  }
  out.emit(std::move(r));
}

void hypercube_exists(const Options& o, Emitter& out, unsigned threads) {
  Json params{{"dim", o.dim}};
  const double x = resolve_x(o, params, o.dim);
  params["samples"] = o.samples;
  auto r = make("hypercube exists", params);
  r.set_stream(o.seed, o.samples);
  if (o.samples == 1) {
    r.stats["exists"] = path_exists(generate_hypercube(o.dim, x, o.seed));
  } else {
    const auto hits = replicate<int>(o.samples, threads, [&](std::size_t i) {
      return path_exists(generate_hypercube(o.dim, x, derive_seed(o.seed, i))) ? 1 : 0;
    });
    std::vector<double> v(hits.begin(), hits.end());
    const auto m = moment_summary(v);
    r.stats["estimate"] = m.mean;
    r.stats["se"] = m.se_mean;
  }
  out.emit(std::move(r));
}

void hypercube_thetak(const Options& o, Emitter& out, unsigned threads) {
  Json params{{"dim", o.dim}};
  const double x = resolve_x(o, params, o.dim);
  params["k"] = o.k;
  params["samples"] = o.samples;
  auto r = make("hypercube thetak", params);
  r.set_stream(o.seed, o.samples);
  if (o.samples == 1) {
    const auto land = generate_hypercube(o.dim, x, o.seed);
    r.stats["theta_k"] = theta_k_hypercube(land, o.k);
    r.stats["theta_k_factorized"] = theta_k_factorized(land, o.k);
  } else {
    const auto pairs = replicate<std::pair<double, double>>(o.samples, threads, [&](std::size_t i) {
      const auto land = generate_hypercube(o.dim, x, derive_seed(o.seed, i));
      return std::pair{theta_k_hypercube(land, o.k), theta_k_factorized(land, o.k)};
    });
    std::vector<double> a, b;
    for (const auto& [u, v] : pairs) {
      a.push_back(u);
      b.push_back(v);
    }
    put_summary(r.stats, a, "theta_k_");
    put_summary(r.stats, b, "factorized_");
    r.stats["expected"] = expected_paths(o.dim, x);
  }
  out.emit(std::move(r));
}

// --- tree --------------------------------------------------------------------

void tree_sample(const Options& o, Emitter& out, unsigned threads) {
  Json params{{"dim", o.dim}};
  const double x = resolve_x(o, params, o.dim);
  params["samples"] = o.samples;
  params["budget"] = tree_budget(o);
  auto r = make("tree sample", params);
  r.set_stream(o.seed, o.samples);
  if (o.samples == 1) {
    r.stats["theta"] = sample_theta_tree(TreeParams{o.dim, x, o.seed, tree_budget(o)});
  } else {
    const auto t = sample_theta_tree_mc(o.dim, x, o.samples, o.seed, tree_budget(o), threads);
    std::vector<double> v, v2;
    for (auto c : t) {
      v.push_back(double(c));
      v2.push_back(double(c) * double(c));
    }
    put_summary(r.stats, v);
    const auto sq = moment_summary(v2);
    r.stats["mean_sq"] = sq.mean;
    r.stats["mean_sq_se"] = sq.se_mean;
    r.stats["expected"] = expected_paths(o.dim, x);
    if (o.dim >= 2) r.stats["expected_sq"] = second_moment_tree(o.dim, x);
  }
  out.emit(std::move(r));
}

void tree_thetak(const Options& o, Emitter& out, unsigned threads) {
  Json params{{"dim", o.dim}};
  const double x = resolve_x(o, params, o.dim);
  params["k"] = o.k;
  params["samples"] = o.samples;
  params["budget"] = tree_budget(o);
  auto r = make("tree thetak", params);
  r.set_stream(o.seed, o.samples);
  if (o.samples == 1) {
    r.stats["theta_k"] = theta_k_tree(TreeParams{o.dim, x, o.seed, tree_budget(o)}, o.k);
  } else {
    const auto v = replicate<double>(o.samples, threads, [&](std::size_t i) {
      return theta_k_tree(TreeParams{o.dim, x, derive_seed(o.seed, i), tree_budget(o)}, o.k);
    });
    put_summary(r.stats, v);
    r.stats["expected"] = expected_paths(o.dim, x);
  }
  out.emit(std::move(r));
}

void tree_exists(const Options& o, Emitter& out, unsigned threads) {
  Json params{{"dim", o.dim}};
  const double x = resolve_x(o, params, o.dim);
  params["samples"] = o.samples;
  params["budget"] = tree_budget(o);
  auto r = make("tree exists", params);
  r.set_stream(o.seed, o.samples);
  const auto e = tree_existence_mc(o.dim, x, o.samples, o.seed, tree_budget(o), threads);
  r.stats["estimate"] = e.estimate;
  r.stats["se"] = e.std_error;
  r.stats["completed"] = e.samples;
  r.stats["budget_hits"] = e.budget_hits;
  out.emit(std::move(r));
}

// --- moments -----------------------------------------------------------------

void moments_cmd(const std::string& which, const Options& o, Emitter& out) {
  Json params{{"dim", o.dim}};
  Json s;
  const int L = o.dim;
  if (which == "first") {
    const double x = resolve_x(o, params, L);
    s["mean"] = expected_paths(L, x);
  } else if (which == "second") {
    const double x = resolve_x(o, params, L);
    s["second_moment"] = second_moment_tree(L, x);
    s["variance"] = variance_tree(L, x);
  } else if (which == "var-star") {
    const double v = var_star_tree(L);
    s["var_star"] = v;
    s["var_star_over_L"] = v / L;
  } else if (which == "cond-var") {
    const double x = resolve_x(o, params, L);
    params["k"] = o.k;
    const double v = cond_var_tree(L, x, o.k);
    s["cond_var"] = v;
    s["cond_var_over_L2"] = v / (double(L) * L);
  } else if (which == "limits") {
    require(o.X_scaled.has_value() != o.logscaled.has_value(), "limits needs exactly one of --X-scaled, --logscaled");
    const Regime regime = o.X_scaled ? Regime::Linear : Regime::Log;
    const double X = o.X_scaled ? *o.X_scaled : *o.logscaled;
    params[o.X_scaled ? "X_scaled" : "logscaled"] = X;
    const auto lim = scaled_limits(L, X, regime);
    params["x"] = lim.x;
    s = {{"mean", lim.mean},           {"var", lim.var},
         {"scaled_mean", lim.scaled_mean}, {"scaled_var", lim.scaled_var},
         {"limit_mean", lim.limit_mean},   {"limit_var", lim.limit_var}};
  } else if (which == "a-coeff") {
    params["q"] = o.q;
    s["a"] = a_coeff(L, o.q);
    s["log_a"] = log_a_coeff(L, o.q);
  } else if (which == "q0") {
    s["q0"] = q0(L);
    if (L >= 12) {
      const auto b = a_bound_check(L);
      s["bound_holds"] = b.holds;
      s["first_violation"] = b.first_violation;
      s["worst_log_excess"] = b.worst_log_excess;
    }
  } else if (which == "pair-tree") {
    const double x = resolve_x(o, params, L);
    params["q"] = o.q;
    s["probability"] = pair_open_prob_tree(L, o.q, x);
    try {
      s["pair_count"] = tree_pair_count(L, o.q);
    } catch (const CountOverflow&) {
      s["pair_count"] = nullptr;
    }
  } else if (which == "pair-cube") {
    const double x = resolve_x(o, params, L);
    params["p"] = o.p;
    params["q"] = o.q;
    s["probability"] = pair_open_prob_hypercube(L, o.p, o.q, x);
    try {
      s["class_size"] = indecomposable_count(L - o.p - o.q);
    } catch (const CountOverflow&) {
      s["class_size"] = nullptr;
    }
    s["class_size_over_factorial"] = indecomposable_fraction(L - o.p - o.q);
  } else if (which == "bn") {
    params = Json{{"n", o.n}};
    s["B"] = indecomposable_count(o.n);
  } else if (which == "pstar-bound") {
    const double b = pstar_upper_bound(L);
    s["upper_bound"] = b;
    s["bound_times_L_over_lnL"] = b * L / std::log(double(L));
  }
  auto r = make("moments " + which, params);
  r.stats = s;
  out.emit(std::move(r));
}

// --- recursion -----------------------------------------------------------------

int levels_of(const Options& o) { return o.levels > 0 ? o.levels : o.dim; }

void recursion_cmd(const std::string& which, const Options& o, Emitter& out) {
  Json params;
  if (which == "gf" || which == "pexist") {
    const int L = levels_of(o);
    params["levels"] = L;
    params["grid"] = o.grid;
    EnvelopeFunction f;
    if (which == "gf") {
      params["mu"] = o.mu;
      params["lambda"] = o.mu / L;
      f = tree_gf(o.mu / L, L, o.grid);
    } else {
      f = existence_prob(L, o.grid);
    }
    const bool point = o.x || o.X_scaled || o.logscaled;
    if (point) {
      const double x = resolve_x(o, params, L);
      auto r = make("recursion " + which, params);
      r.stats["value"] = f.at(x);
      if (which == "gf" && o.X_scaled) r.stats["limit"] = 1.0 / (1.0 + o.mu * std::exp(-*o.X_scaled));
      if (which == "pexist") r.stats["p_star"] = p_star(L, o.grid);
      out.emit(std::move(r));
      return;
    }
    require(o.points >= 1, "--points must be at least 1");
    if (which == "pexist") {
      auto r = make("recursion pexist", params);
      r.stats["p_star"] = p_star(L, o.grid);
      if (L >= 2) r.stats["upper_bound"] = pstar_upper_bound(L);
      out.emit(std::move(r));
    }
    for (int i = 0; i <= o.points; ++i) {
      Json row = params;
      const double x = double(i) / o.points;
      row["x"] = x;
      auto r = make("recursion " + which, row);
      r.stats["value"] = f.at(x);
      out.emit(std::move(r));
    }
  } else if (which == "fk") {
    params = {{"k", o.k}, {"zmax", o.zmax}, {"grid", o.grid}};
    const auto f = fk_iterate(o.k, o.zmax, o.grid);
    double sup = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) sup = std::max(sup, std::fabs(f.values[i] - 1.0 / (1.0 + f.node(i))));
    auto r = make("recursion fk", params);
    if (o.zmax >= 1.0) r.stats["F_at_1"] = f.at(1.0);
    if (o.zmax >= o.mu) r.stats["F_at_mu"] = f.at(o.mu);
    r.stats["sup_error_vs_limit"] = sup;
    out.emit(std::move(r));
  } else if (which == "delta-check") {
    params = {{"k_max", o.k}, {"zmax", o.zmax}, {"grid", o.grid}};
    const auto rep = delta_bound_check(o.k, o.zmax, o.grid);
    auto r = make("recursion delta-check", params);
    r.stats["M"] = rep.M;
    r.stats["z_at_M"] = rep.z_at_M;
    r.stats["ok"] = rep.ok();
    Json levels = Json::array();
    for (const auto& l : rep.levels) levels.push_back({{"k", l.k}, {"min", l.min}, {"max", l.max}, {"at_one", l.at_one}});
    r.stats["levels"] = levels;
    Json viol = Json::array();
    for (const auto& v : rep.violations) viol.push_back({{"k", v.k}, {"z", v.z}, {"value", v.value}});
    r.stats["violations"] = viol;
    out.emit(std::move(r));
  }
}

// --- cascade -----------------------------------------------------------------

void cascade_cmd(const std::string& which, const Options& o, Emitter& out, unsigned threads) {
  CascadeParams cp{o.k, o.delta, o.seed, o.samples, o.budget ? o.budget : kDefaultAtomBudget};
  Json params{{"k", o.k}, {"delta", o.delta}, {"samples", o.samples}, {"budget", cp.atom_budget}};
  if (which == "sample") {
    params["mu"] = o.mu;
    const auto samples = sample_cascades(cp, threads);
    std::vector<double> y, lap, bias, atoms;
    for (const auto& s : samples) {
      y.push_back(s.y);
      lap.push_back(std::exp(-o.mu * s.y));
      bias.push_back(s.bias_bound);
      atoms.push_back(double(s.atoms_visited));
    }
    auto r = make("cascade sample", params);
    r.set_stream(o.seed, o.samples);
    if (o.samples >= 2) {
      put_summary(r.stats, y, "y_");
      put_summary(r.stats, lap, "laplace_");
    } else {
      r.stats["y"] = y[0];
      r.stats["laplace"] = lap[0];
    }
    double mb = 0.0, ma = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      mb += bias[i];
      ma += atoms[i];
    }
    r.stats["mean_bias_bound"] = mb / double(y.size());
    r.stats["mean_atoms"] = ma / double(y.size());
    double expected = 0.0;
    for (int j = 1; j <= o.k; ++j) expected += expected_atoms(j, o.delta);
    r.stats["expected_atoms"] = expected;
    out.emit(std::move(r));
  } else {
    const auto rep = cascade_limit_check(cp, threads);
    auto r = make("cascade ks", params);
    r.set_stream(o.seed, o.samples);
    r.stats = {{"ks", rep.ks},           {"mean_y", rep.mean_y}, {"mean_bias", rep.mean_bias},
               {"gap_bound", rep.gap_bound}, {"M", rep.M}};
    out.emit(std::move(r));
  }
}

// --- verify --------------------------------------------------------------------

bool verify_cmd(const Options& o, Emitter& out, unsigned threads) {
  VerifyOptions vo{o.seed, threads};
  bool all_passed = true;
  std::vector<CriterionResult> done;
  for (int id : battery_criteria(o.battery)) {
    CriterionResult c = id == 13 ? reproducibility_check(done, vo) : run_criterion(id, vo);
    all_passed = all_passed && c.passed;
    auto r = make("verify " + o.battery, Json{{"criterion", c.id}});
    r.set_stream(o.seed, 1);
    r.stats = {{"criterion", c.id}, {"title", c.title}, {"status", c.passed ? "PASS" : "FAIL"},
               {"time_limit", c.time_limit}, {"details", c.stats}};
    if (o.timing) r.stats["seconds"] = c.seconds;
    out.emit(std::move(r));
    done.push_back(std::move(c));
  }
  return all_passed;
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Accessible paths in House-of-Cards landscapes"};
  app.set_version_flag("--version", artifact_version());
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "worker threads (default: PATHSCAPE_THREADS, else all cores)");
    c->add_option("--csv", o.csv, "also write the records to this CSV file");
    c->add_flag("--timing", o.timing, "add wall-clock seconds to each record");
  };
  auto add_x = [&](CLI::App* c) {
    auto* a = c->add_option("--x", o.x, "starting value");
    auto* b = c->add_option("--X-scaled", o.X_scaled, "x = X/dim");
    auto* d = c->add_option("--logscaled", o.logscaled, "x = (ln dim + X)/dim");
    a->excludes(b)->excludes(d);
    b->excludes(d);
  };
  add_output(&app);

  using Action = std::function<void(Emitter&, unsigned)>;
  std::vector<std::pair<CLI::App*, Action>> leaves;
  bool verify_failed = false;

  auto* hyper = app.add_subcommand("hypercube", "open paths on {0,1}^L")->require_subcommand(1);
  auto* tree = app.add_subcommand("tree", "open paths on the decreasing-arity tree")->require_subcommand(1);
  auto sampling = [&](CLI::App* group, const char* name, const char* help, Action a) {
    auto* c = group->add_subcommand(name, help);
    c->add_option("--dim", o.dim, "dimension L")->required();
    add_x(c);
    c->add_option("--k", o.k, "level for theta_k");
    c->add_option("--samples", o.samples, "independent realizations");
    c->add_option("--seed", o.seed, "master seed");
    c->add_option("--budget", o.budget, "node budget (tree searches)");
    add_output(c);
    leaves.emplace_back(c, std::move(a));
  };
  sampling(hyper, "count", "number of open paths", [&](Emitter& e, unsigned t) { hypercube_count(o, e, t); });
  sampling(hyper, "exists", "whether an open path exists", [&](Emitter& e, unsigned t) { hypercube_exists(o, e, t); });
  sampling(hyper, "thetak", "conditional expectation theta_k", [&](Emitter& e, unsigned t) { hypercube_thetak(o, e, t); });
  sampling(tree, "sample", "number of open paths", [&](Emitter& e, unsigned t) { tree_sample(o, e, t); });
  sampling(tree, "thetak", "conditional expectation theta_k", [&](Emitter& e, unsigned t) { tree_thetak(o, e, t); });
  sampling(tree, "exists", "Monte Carlo existence probability", [&](Emitter& e, unsigned t) { tree_exists(o, e, t); });

  auto* mom = app.add_subcommand("moments", "closed-form moments and coefficients")->require_subcommand(1);
  for (const char* name : {"first", "second", "var-star", "cond-var", "limits", "a-coeff", "q0", "pair-tree",
                           "pair-cube", "bn", "pstar-bound"}) {
    auto* c = mom->add_subcommand(name);
    const std::string which = name;
    if (which != "bn") c->add_option("--dim", o.dim, "dimension L")->required();
    if (which == "first" || which == "second" || which == "cond-var" || which == "limits" || which == "pair-tree" ||
        which == "pair-cube")
      add_x(c);
    if (which == "cond-var") c->add_option("--k", o.k, "conditioning depth")->required();
    if (which == "a-coeff" || which == "pair-tree" || which == "pair-cube") c->add_option("--q", o.q, "shared bonds")->required();
    if (which == "pair-cube") c->add_option("--p", o.p, "shared initial steps")->required();
    if (which == "bn") c->add_option("--n", o.n, "permutation size")->required();
    add_output(c);
    leaves.emplace_back(c, [&, which](Emitter& e, unsigned) { moments_cmd(which, o, e); });
  }

  auto* rec = app.add_subcommand("recursion", "grid iteration of the functional recursions")->require_subcommand(1);
  for (const char* name : {"gf", "pexist", "fk", "delta-check"}) {
    auto* c = rec->add_subcommand(name);
    const std::string which = name;
    c->add_option("--grid", o.grid, "grid intervals");
    if (which == "gf" || which == "pexist") {
      c->add_option("--levels", o.levels, "tree size L");
      c->add_option("--dim", o.dim, "alias for --levels");
      add_x(c);
      c->add_option("--points", o.points, "table rows when no point is given");
      if (which == "gf") c->add_option("--mu", o.mu, "lambda = mu/L");
    } else {
      c->add_option("--k", o.k, which == "fk" ? "generation k" : "largest k checked");
      c->add_option("--zmax", o.zmax, "right end of the z grid");
      if (which == "fk") c->add_option("--mu", o.mu, "extra evaluation point");
    }
    add_output(c);
    leaves.emplace_back(c, [&, which](Emitter& e, unsigned) { recursion_cmd(which, o, e); });
  }

  auto* cas = app.add_subcommand("cascade", "truncated Poisson cascade")->require_subcommand(1);
  for (const char* name : {"sample", "ks"}) {
    auto* c = cas->add_subcommand(name);
    const std::string which = name;
    c->add_option("--k", o.k, "generations");
    c->add_option("--delta", o.delta, "absolute prune threshold");
    c->add_option("--samples", o.samples, "number of cascades");
    c->add_option("--seed", o.seed, "master seed");
    c->add_option("--budget", o.budget, "atom budget per cascade");
    if (which == "sample") c->add_option("--mu", o.mu, "Laplace argument");
    add_output(c);
    leaves.emplace_back(c, [&, which](Emitter& e, unsigned t) { cascade_cmd(which, o, e, t); });
  }

  auto* ver = app.add_subcommand("verify", "run an acceptance battery");
  std::string names;
  for (const auto& b : battery_names()) names += (names.empty() ? "" : ", ") + b;
  ver->add_option("battery", o.battery, "one of: " + names)->required();
  ver->add_option("--seed", o.seed, "master seed");
  add_output(ver);
  leaves.emplace_back(ver, [&](Emitter& e, unsigned t) { verify_failed = !verify_cmd(o, e, t); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("parameter", e.what());
    return 2;
  }

  try {
    if (ver->parsed() && ver->get_option("--seed")->count() == 0) o.seed = VerifyOptions{}.seed;
    if (ver->parsed()) battery_criteria(o.battery);  // reject unknown names before any output
    const unsigned threads = resolve_threads(o.threads);
    Emitter out(o);
    for (auto& [cmd, act] : leaves) {
      if (cmd->parsed()) {
        act(out, threads);
        break;
      }
    }
    out.finish();
  } catch (const DomainError& e) {
    print_error("parameter", e.what());
    return 2;
  } catch (const BudgetExceeded& e) {
    print_error("budget", e.what());
    return 3;
  } catch (const CountOverflow& e) {
    print_error("overflow", e.what());
    return 1;
  }
  return verify_failed ? 1 : 0;
}
