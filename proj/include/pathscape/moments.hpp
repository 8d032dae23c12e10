#pragma once

// Closed-form moments of Θ on the tree and the pair formulas behind them.
//
// Factorial ratios are carried as logarithms.  The coefficients a(L,q) are
// built from the consecutive ratio a(L,q)/a(L,q-1), starting from both exact
// ends a(L,0) = L(L-1) and a(L,L-2) = 2, so that values near either end keep
// full precision even at L = 10^6.

#include <cstdint>
#include <vector>

namespace pathscape {

/// (1-x)^n, computed as exp(n log1p(-x)).
double pow1m(double x, double n);

/// E^x(Θ) = L(1-x)^{L-1}.
double expected_paths(int L, double x);

/// ln a(L,q) for q = 0 .. L-2 in one O(L) sweep.
std::vector<double> log_a_row(int L);

double log_a_coeff(int L, int q);
/// a(L,q) = L!(2L-2q-2)! / ((L-q-2)!(2L-q-2)!),  0 <= q <= L-2.
double a_coeff(int L, int q);

/// The expanded product form L^2/2^q · Π(1-j/L) / Π(1-(q+1+j)/(2L)).
double a_coeff_product(int L, int q);

/// E^x(Θ^2) = Σ_q a(L,q)(1-x)^{2L-q-2} + L(1-x)^{L-1}.  L >= 2.
double second_moment_tree(int L, double x);

/// Var^x(Θ), computed without the subtraction E(Θ^2) - E(Θ)^2.
double variance_tree(int L, double x);

/// Variance of Θ when the root value is itself uniform: Σ_q a(L,q)/(2L-q-1).
double var_star_tree(int L);

/// E^x[var(Θ | first k levels)].  k in [0, L-2]; k = 0 is the full variance.
double cond_var_tree(int L, double x, int k);

enum class Regime { Linear, Log };  // x = X/L  or  x = (ln L + X)/L

double scaled_origin(int L, double X, Regime regime);

struct ScaledLimits {
  double x = 0.0;
  double mean = 0.0;         // E(Θ)
  double var = 0.0;          // Var(Θ)
  double scaled_mean = 0.0;  // E(Θ)/L, or E(Θ) in the log regime
  double scaled_var = 0.0;   // Var(Θ)/L^2, or Var(Θ) in the log regime
  double limit_mean = 0.0;
  double limit_var = 0.0;
};

ScaledLimits scaled_limits(int L, double X, Regime regime);

/// ⌈ln(L^2)/ln 2 + 1⌉, computed in integers.  L >= 2.
int q0(int L);

struct ABoundReport {
  int L = 0;
  int q0 = 0;
  bool holds = true;
  int first_violation = -1;      // smallest q that breaks the bound, or -1
  double worst_log_excess = 0.0; // max over q of ln a(L,q) - ln(bound), <= 0 when it holds
};

/// a(L,q) <= L^2 1.99^{-q} for q <= q0(L) and a(L,q) <= 2 for q0(L) <= q <= L-2.
/// L >= 12.
ABoundReport a_bound_check(int L);

struct ABoundScan {
  int from = 0, to = 0;           // scanned L in [from, to)
  int smallest_violation = -1;    // -1 when none
  int largest_violation = -1;
  int violations = 0;
};

ABoundScan a_bound_scan(int from, int to);

/// Probability that two given tree paths sharing their first q bonds are both open.
double pair_open_prob_tree(int L, int q, double x);
/// Ordered pairs of distinct tree paths sharing exactly q bonds: L!(L-q-1)(L-q-1)!.
std::uint64_t tree_pair_count(int L, int q);

/// Probability that a reference hypercube path and a path of class I_{p,q}
/// are both open.  p, q >= 0, p + q <= L-2.
double pair_open_prob_hypercube(int L, int p, int q, double x);

/// B(n): indecomposable permutations of n elements, from n! = Σ_k B(k)(n-k)!.
std::uint64_t indecomposable_count(int n);
/// B(n)/n! in floating point; usable far beyond the 64-bit range of B(n).
double indecomposable_fraction(int n);

/// (1/L^2) L! Σ_{p,q<k} |I_{p,q}| pair_open_prob_hypercube(L,p,q,X/L).
double hypercube_pair_partial_sum(int L, double X, int k);
/// Its large-L limit 4e^{-2X}(1-2^{-k})^2.
double hypercube_pair_partial_limit(double X, int k);

/// 1 - exp(-ln L/(L-1)) + exp(-L ln L/(L-1)).  L >= 2.
double pstar_upper_bound(int L);

}  // namespace pathscape
