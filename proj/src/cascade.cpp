#include "pathscape/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pathscape/errors.hpp"
#include "pathscape/parallel.hpp"
#include "pathscape/recursion.hpp"
#include "pathscape/stats.hpp"

namespace pathscape {
namespace {

void check_params(const CascadeParams& p) {
  require(p.generations >= 0, "generations must be non-negative");
  require(p.delta > 0.0 && p.delta < 1.0, "delta must lie in (0,1)");
  require(p.samples >= 1, "sample count must be at least 1");
  require(p.atom_budget > 0, "atom budget must be positive");
}

class Expander {
 public:
  Expander(const CascadeParams& p, SplitMix64& rng) : p_(p), rng_(rng) {}

  void expand(double position, int generation) {
    if (generation == p_.generations) {
      out.y += position;
      return;
    }
    out.bias_bound += p_.delta;
    const double log_span = std::log(position / p_.delta);
    if (!(log_span > 0.0)) return;  // rounding put the particle at δ; nothing above it
    std::poisson_distribution<std::uint64_t> count(log_span);
    const std::uint64_t m = count(rng_);
    out.atoms_visited += m;
    if (out.atoms_visited > p_.atom_budget)
      throw BudgetExceeded("cascade exceeded the atom budget", p_.atom_budget);
    for (std::uint64_t j = 0; j < m; ++j) {
      const double child = position * std::exp(-rng_.uniform() * log_span);
      expand(child, generation + 1);
    }
  }

  CascadeSample out;

 private:
  const CascadeParams& p_;
  SplitMix64& rng_;
};

}  // namespace

std::vector<double> sample_unit_poisson_atoms(double delta_rel, SplitMix64& rng) {
  require(delta_rel > 0.0 && delta_rel < 1.0, "relative threshold must lie in (0,1)");
  const double log_span = -std::log(delta_rel);
  std::poisson_distribution<std::uint64_t> count(log_span);
  const std::uint64_t m = count(rng);
  std::vector<double> atoms(m);
  for (auto& a : atoms) a = std::exp(-rng.uniform() * log_span);
  return atoms;
}

CascadeSample sample_cascade(const CascadeParams& params, SplitMix64& rng) {
  check_params(params);
  Expander e(params, rng);
  e.expand(1.0, 0);
  return e.out;
}

std::vector<CascadeSample> sample_cascades(const CascadeParams& params, unsigned threads) {
  check_params(params);
  return replicate<CascadeSample>(params.samples, threads, [&](std::size_t i) {
    SplitMix64 rng(derive_seed(params.seed, i));
    return sample_cascade(params, rng);
  });
}

double expected_atoms(int generation, double delta) {
  require(generation >= 0, "generation must be non-negative");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  const double l = -std::log(delta);
  return std::exp(generation * std::log(l) - std::lgamma(generation + 1.0));
}

double delta0_sup() {
  // δ_0 tends to 1 at infinity and its maximum lies well inside [0, 40].
  const GridFunction d = delta_iterate(0, 40.0, 1 << 16);
  const auto it = std::max_element(d.values.begin(), d.values.end());
  return *it;
}

CascadeKsReport cascade_limit_check(const CascadeParams& params, unsigned threads) {
  const auto samples = sample_cascades(params, threads);
  std::vector<double> ys(samples.size());
  double sum_y = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ys[i] = samples[i].y;
    sum_y += samples[i].y;
    sum_b += samples[i].bias_bound;
  }
  CascadeKsReport r;
  r.generations = params.generations;
  r.delta = params.delta;
  r.samples = params.samples;
  r.ks = ks_statistic(Sample(std::move(ys)), ReferenceLaw::exponential(1.0));
  r.mean_y = sum_y / double(samples.size());
  r.mean_bias = sum_b / double(samples.size());
  r.M = delta0_sup();
  r.gap_bound = r.M * (4.0 / 27.0) / std::ldexp(1.0, params.generations);
  return r;
}

}  // namespace pathscape
