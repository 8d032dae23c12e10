#pragma once

// Grid iteration of the tree generating function, the existence probability
// and the cascade Laplace transform F_k.
//
// G(λ,x,l) = [x + ∫_x^1 G(λ,y,l-1) dy]^l is iterated on H = 1 - G, which
// carries the factor (1-x)^{l-1}.  Each level stores h = H/(1-x)^{l-1}; the
// integral ∫_x^1 (1-y)^{l-2} h(y) dy is taken cell by cell with exact moments
// of the power weight against a quadratic fit of h, and accumulated from the
// right as a suffix recurrence.  The existence probability is the same
// iteration started from h ≡ 1.

#include <cstddef>
#include <string>
#include <vector>

namespace pathscape {

struct GridFunction {
  double a = 0.0, b = 1.0;
  std::vector<double> values;  // n+1 samples at a + i(b-a)/n
  std::string label;

  std::size_t intervals() const noexcept { return values.size() - 1; }
  double step() const noexcept { return (b - a) / static_cast<double>(intervals()); }
  double node(std::size_t i) const noexcept { return a + static_cast<double>(i) * step(); }
  /// Piecewise quadratic interpolation through three consecutive samples.
  double at(double t) const;
};

/// A function on [0,1] of the form (1-x)^power · reduced(x), or one minus that.
struct EnvelopeFunction {
  GridFunction values;   // the function itself on the grid
  GridFunction reduced;  // the smooth factor
  int power = 0;
  bool complement = false;

  /// Interpolates the smooth factor and reapplies the envelope, which keeps
  /// off-grid values accurate where (1-x)^power varies on the mesh scale.
  double at(double x) const;
};

/// G(λ,·,L) on [0,1] with grid_n intervals.  λ >= 0, L >= 1, grid_n >= 64.
EnvelopeFunction tree_gf(double lambda, int L, int grid_n);

/// x ↦ P^x(Θ >= 1) from p(x,l) = 1 - (1 - ∫_x^1 p(y,l-1) dy)^l, p(·,1) ≡ 1.
EnvelopeFunction existence_prob(int L, int grid_n);

/// ∫_0^1 P^x(Θ >= 1) dx, integrating the envelope exactly against the
/// quadratic fit of the reduced factor.
double p_star(int L, int grid_n);

/// F_k on [0, z_max] by trapezoid iteration of
/// F_k(z) = exp(-∫_0^z (1 - F_{k-1}(z'))/z' dz'), F_0(z) = e^{-z}.
GridFunction fk_iterate(int k, double z_max, int grid_n);

/// δ_0(z) = (1+z)^2/z^2 · (1 - (1+z)e^{-z}), with δ_0(0) = 1/2.
double delta0(double z);

/// δ_k on [0, z_max] from its own recursion: with
/// E_k(z) = 2^{1-k} ∫_0^z z' δ_{k-1}(z')/(1+z')^3 dz',
/// F_k = e^{-E_k}/(1+z) and δ_k = 2^k (1+z)^2/z^2 · (1 - e^{-E_k}).
/// This avoids the cancellation in 1/(1+z) - F_k at large k.
GridFunction delta_iterate(int k, double z_max, int grid_n);

struct DeltaViolation {
  int k = 0;
  double z = 0.0;
  double value = 0.0;
};

struct DeltaLevel {
  int k = 0;
  double min = 0.0, max = 0.0;
  double at_one = 0.0;          // δ_k(1)
  double route_gap = 0.0;       // sup |δ_k from δ recursion - δ_k from F_k|, z >= 0.5
};

struct DeltaReport {
  double M = 0.0;        // sup of δ_0 on the grid
  double z_at_M = 0.0;
  double tolerance = 0.0;
  std::vector<DeltaLevel> levels;
  std::vector<DeltaViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks 0 <= δ_k <= M (up to `tolerance`) for k = 0 .. k_max.
DeltaReport delta_bound_check(int k_max, double z_max, int grid_n, double tolerance = 1e-9);

}  // namespace pathscape
