#include "pathscape/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathscape/errors.hpp"

namespace pathscape {
namespace {

// Neumaier-compensated running sum.
class Sum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ln[a(L,q)/a(L,q-1)] for 1 <= q <= L-2.  Numerator and denominator are
// exact in double for L below 2^25.
double log_ratio(int L, int q) {
  const double num = double(L - q - 1) * double(2 * L - q - 1);
  const double den = double(2 * L - 2 * q) * double(2 * L - 2 * q - 1);
  return std::log(num / den);
}

void check_q(int L, int q) {
  require(L >= 2, "a(L,q) needs L >= 2");
  require(q >= 0 && q <= L - 2, "q must lie in [0, L-2]");
}

double log_x1m(double x) {
  require(x >= 0.0 && x <= 1.0, "x must lie in [0,1]");
  return std::log1p(-x);  // -inf at x = 1
}

// exp(la + n l1x) with the convention that a zero power of 1-x is 1.
double term(double la, double n, double l1x) { return n == 0.0 ? std::exp(la) : std::exp(la + n * l1x); }

double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

double log_binomial(int n, int k) { return log_factorial(n) - log_factorial(k) - log_factorial(n - k); }

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw CountOverflow("integer result exceeds 64 bits");
  return out;
}

std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f = checked_mul(f, static_cast<std::uint64_t>(i));
  return f;
}

}  // namespace

double pow1m(double x, double n) {
  if (n == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  return std::exp(n * std::log1p(-x));
}

double expected_paths(int L, double x) {
  require(L >= 1, "L must be at least 1");
  log_x1m(x);
  return L * pow1m(x, L - 1);
}

std::vector<double> log_a_row(int L) {
  require(L >= 2, "a(L,q) needs L >= 2");
  const int last = L - 2;
  std::vector<double> la(last + 1);
  const int mid = last / 2;
  Sum up;
  up.add(std::log(double(L) * double(L - 1)));
  la[0] = up.value();
  for (int q = 1; q <= mid; ++q) {
    up.add(log_ratio(L, q));
    la[q] = up.value();
  }
  Sum down;
  down.add(std::log(2.0));
  la[last] = down.value();
  for (int q = last; q > mid + 1; --q) {
    down.add(-log_ratio(L, q));
    la[q - 1] = down.value();
  }
  return la;
}

double log_a_coeff(int L, int q) {
  check_q(L, q);
  const int last = L - 2;
  Sum s;
  if (q <= last - q) {
    s.add(std::log(double(L) * double(L - 1)));
    for (int j = 1; j <= q; ++j) s.add(log_ratio(L, j));
  } else {
    s.add(std::log(2.0));
    for (int j = last; j > q; --j) s.add(-log_ratio(L, j));
  }
  return s.value();
}

double a_coeff(int L, int q) { return std::exp(log_a_coeff(L, q)); }

double a_coeff_product(int L, int q) {
  check_q(L, q);
  Sum s;
  s.add(2.0 * std::log(double(L)) - q * std::log(2.0));
  for (int j = 1; j <= q + 1; ++j) s.add(std::log1p(-double(j) / L));
  for (int j = q + 2; j <= 2 * q + 1; ++j) s.add(-std::log1p(-double(j) / (2.0 * L)));
  return std::exp(s.value());
}

double second_moment_tree(int L, double x) {
  require(L >= 2, "second moment needs L >= 2");
  const double l1x = log_x1m(x);
  if (x == 1.0) return 0.0;
  const auto la = log_a_row(L);
  Sum s;
  for (int q = 0; q <= L - 2; ++q) s.add(term(la[q], 2.0 * L - q - 2, l1x));
  s.add(expected_paths(L, x));
  return s.value();
}

double cond_var_tree(int L, double x, int k) {
  require(L >= 2, "conditional variance needs L >= 2");
  require(k >= 0 && k <= L - 2, "k must lie in [0, L-2]");
  const double l1x = log_x1m(x);
  if (x == 1.0) return 0.0;
  const auto la = log_a_row(L);
  Sum s;
  s.add(-term(la[k], 2.0 * L - k - 2, l1x) / (L - k - 1));
  for (int q = k + 1; q <= L - 2; ++q) s.add(term(la[q], 2.0 * L - q - 2, l1x));
  s.add(expected_paths(L, x));
  return s.value();
}

double variance_tree(int L, double x) { return cond_var_tree(L, x, 0); }

double var_star_tree(int L) {
  require(L >= 2, "Var* needs L >= 2");
  const auto la = log_a_row(L);
  Sum s;
  for (int q = 0; q <= L - 2; ++q) s.add(std::exp(la[q]) / (2.0 * L - q - 1));
  return s.value();
}

double scaled_origin(int L, double X, Regime regime) {
  return regime == Regime::Linear ? X / L : (std::log(double(L)) + X) / L;
}

ScaledLimits scaled_limits(int L, double X, Regime regime) {
  require(L >= 3, "scaled limits need L >= 3");
  ScaledLimits r;
  r.x = scaled_origin(L, X, regime);
  require(r.x >= 0.0 && r.x <= 1.0, "scaled origin value falls outside [0,1]");
  r.mean = expected_paths(L, r.x);
  r.var = variance_tree(L, r.x);
  if (regime == Regime::Linear) {
    r.scaled_mean = r.mean / L;
    r.scaled_var = r.var / (double(L) * L);
    r.limit_mean = std::exp(-X);
    r.limit_var = std::exp(-2.0 * X);
  } else {
    r.scaled_mean = r.mean;
    r.scaled_var = r.var;
    r.limit_mean = std::exp(-X);
    r.limit_var = std::exp(-2.0 * X) + std::exp(-X);
  }
  return r;
}

int q0(int L) {
  require(L >= 2, "q0 needs L >= 2");
  const unsigned __int128 sq = static_cast<unsigned __int128>(L) * static_cast<unsigned __int128>(L);
  int m = 0;
  while ((static_cast<unsigned __int128>(1) << m) < sq) ++m;
  return m + 1;
}

ABoundReport a_bound_check(int L) {
  require(L >= 12, "the a(L,q) bound is stated for L >= 12");
  constexpr double kTol = 1e-12;
  ABoundReport r;
  r.L = L;
  r.q0 = q0(L);
  r.worst_log_excess = -std::numeric_limits<double>::infinity();
  const auto la = log_a_row(L);
  const double log_l2 = 2.0 * std::log(double(L));
  const double log_199 = std::log(1.99);
  const double log_2 = std::log(2.0);
  for (int q = 0; q <= L - 2; ++q) {
    double excess = -std::numeric_limits<double>::infinity();
    if (q <= r.q0) excess = std::max(excess, la[q] - (log_l2 - q * log_199));
    // At q = q0 both branches apply; the point must satisfy each of them.
    if (q >= r.q0) excess = std::max(excess, la[q] - log_2);
    r.worst_log_excess = std::max(r.worst_log_excess, excess);
    if (excess > kTol && r.holds) {
      r.holds = false;
      r.first_violation = q;
    }
  }
  return r;
}

ABoundScan a_bound_scan(int from, int to) {
  require(from >= 12 && to > from, "scan range must lie in [12, to) with to > from");
  ABoundScan s{from, to, -1, -1, 0};
  for (int L = from; L < to; ++L) {
    if (a_bound_check(L).holds) continue;
    ++s.violations;
    if (s.smallest_violation < 0) s.smallest_violation = L;
    s.largest_violation = L;
  }
  return s;
}

double pair_open_prob_tree(int L, int q, double x) {
  check_q(L, q);
  const double l1x = log_x1m(x);
  if (x == 1.0) return 0.0;
  const int n = 2 * L - q - 2;
  return std::exp(n * l1x - log_factorial(n) + log_binomial(2 * L - 2 * q - 2, L - q - 1));
}

std::uint64_t tree_pair_count(int L, int q) {
  check_q(L, q);
  return checked_mul(checked_mul(factorial_u64(L), static_cast<std::uint64_t>(L - q - 1)),
                     factorial_u64(L - q - 1));
}

namespace {

double log_pair_open_hypercube(int L, int p, int q, double l1x) {
  const int n = 2 * L - p - q - 2;
  const int m = L - p - q - 1;
  return n * l1x - log_factorial(n) + log_binomial(2 * m, m);
}

}  // namespace

double pair_open_prob_hypercube(int L, int p, int q, double x) {
  require(L >= 2, "L must be at least 2");
  require(p >= 0 && q >= 0 && p + q <= L - 2, "need p, q >= 0 and p + q <= L-2");
  const double l1x = log_x1m(x);
  if (x == 1.0) return 0.0;
  return std::exp(log_pair_open_hypercube(L, p, q, l1x));
}

std::uint64_t indecomposable_count(int n) {
  require(n >= 1, "B(n) needs n >= 1");
  std::vector<std::uint64_t> b(n + 1, 0);
  for (int m = 1; m <= n; ++m) {
    std::uint64_t rest = 0;
    for (int k = 1; k < m; ++k) {
      if (__builtin_add_overflow(rest, checked_mul(b[k], factorial_u64(m - k)), &rest))
        throw CountOverflow("integer result exceeds 64 bits");
    }
    b[m] = factorial_u64(m) - rest;
  }
  return b[n];
}

double indecomposable_fraction(int n) {
  require(n >= 1, "B(n) needs n >= 1");
  // n!/n! = Σ_k [B(k)/k!]·k!(n-k)!/n!, so b(n) = 1 - Σ_{k<n} b(k)/C(n,k).
  std::vector<double> b(n + 1, 0.0);
  for (int m = 1; m <= n; ++m) {
    Sum rest;
    for (int k = 1; k < m; ++k) rest.add(b[k] * std::exp(-log_binomial(m, k)));
    b[m] = 1.0 - rest.value();
  }
  return b[n];
}

double hypercube_pair_partial_sum(int L, double X, int k) {
  require(L >= 2 && k >= 1, "need L >= 2 and k >= 1");
  const double x = X / L;
  require(x >= 0.0 && x <= 1.0, "X/L must lie in [0,1]");
  Sum s;
  const double log_lfact = log_factorial(L);
  const double log_l2 = 2.0 * std::log(double(L));
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k && p + q <= L - 2; ++q) {
      const int n = L - p - q;
      if (x == 1.0) continue;
      const double log_b = log_factorial(n) + std::log(indecomposable_fraction(n));
      s.add(std::exp(log_lfact + log_b + log_pair_open_hypercube(L, p, q, log_x1m(x)) - log_l2));
    }
  }
  return s.value();
}

double hypercube_pair_partial_limit(double X, int k) {
  const double t = 1.0 - std::ldexp(1.0, -k);
  return 4.0 * std::exp(-2.0 * X) * t * t;
}

double pstar_upper_bound(int L) {
  require(L >= 2, "the bound needs L >= 2");
  const double ln_l = std::log(double(L));
  return -std::expm1(-ln_l / (L - 1)) + std::exp(-L * ln_l / (L - 1));
}

}  // namespace pathscape
