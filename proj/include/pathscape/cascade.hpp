#pragma once

// Truncated Poisson cascade.  Generation 0 is a single particle at 1; each
// particle at p is replaced by p·X_j for the atoms X_j of a Poisson process
// on (0,1] with intensity dx/x.  Y_k is the sum of generation-k positions.
//
// Atoms whose absolute position would fall below δ are never drawn.  Their
// expected contribution to Y_k is exactly δ per expanded particle, because a
// cascade step preserves the expected sum; that amount is reported as
// bias_bound, and E[Y_k] + E[bias_bound] = 1.

#include <cstdint>
#include <vector>

#include "pathscape/rng.hpp"

namespace pathscape {

inline constexpr std::uint64_t kDefaultAtomBudget = 50'000'000;

struct CascadeParams {
  int generations = 0;             // k
  double delta = 1e-6;             // absolute prune threshold, in (0,1)
  std::uint64_t seed = 0;
  std::uint64_t samples = 1;
  std::uint64_t atom_budget = kDefaultAtomBudget;  // per sample
};

struct CascadeAtom {
  int generation = 0;
  double position = 0.0;
  double parent_position = 0.0;
};

struct CascadeSample {
  double y = 0.0;                   // Y_k, pruned
  std::uint64_t atoms_visited = 0;  // atoms drawn over all generations
  double bias_bound = 0.0;
};

/// Atoms of the dx/x process restricted to (δ_rel, 1]: a Poisson(ln(1/δ_rel))
/// count of log-uniform positions exp(-U ln(1/δ_rel)).
std::vector<double> sample_unit_poisson_atoms(double delta_rel, SplitMix64& rng);

/// One cascade, expanded depth first.  Throws BudgetExceeded when more than
/// params.atom_budget atoms are drawn.
CascadeSample sample_cascade(const CascadeParams& params, SplitMix64& rng);

/// params.samples cascades; sample i uses SplitMix64(derive_seed(seed, i)).
std::vector<CascadeSample> sample_cascades(const CascadeParams& params, unsigned threads);

/// (ln 1/δ)^j / j!: expected atoms at generation j.
double expected_atoms(int generation, double delta);

struct CascadeKsReport {
  int generations = 0;
  double delta = 0.0;
  std::uint64_t samples = 0;
  double ks = 0.0;           // against the Exp(1) CDF
  double mean_y = 0.0;
  double mean_bias = 0.0;
  double gap_bound = 0.0;    // M · sup_z z^2/(1+z)^3 / 2^k
  double M = 0.0;
};

CascadeKsReport cascade_limit_check(const CascadeParams& params, unsigned threads);

/// sup over z >= 0 of δ_0(z), found numerically.
double delta0_sup();

}  // namespace pathscape
