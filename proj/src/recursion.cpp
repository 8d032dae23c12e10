#include "pathscape/recursion.hpp"

#include <algorithm>
#include <cmath>

#include "pathscape/errors.hpp"

namespace pathscape {
namespace {

// Cell geometry on [0,1], fixed across levels.  In cell i the weight
// (1-y)^m is written as (1-x_i)^m (1-u)^m with u = (y-x_i)/(1-x_i) in [0,d_i].
struct Mesh {
  std::size_t n;
  double hx;
  std::vector<double> x;        // nodes
  std::vector<double> log1m_x;  // ln(1-x_i)
  std::vector<double> d;        // cell width in u
  std::vector<double> log1m_d;  // ln(1-d_i), -inf in the last cell

  explicit Mesh(std::size_t n_) : n(n_), hx(1.0 / double(n_)), x(n_ + 1), log1m_x(n_ + 1), d(n_), log1m_d(n_) {
    for (std::size_t i = 0; i <= n; ++i) {
      x[i] = double(i) / double(n);
      log1m_x[i] = std::log1p(-x[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = i + 1 == n ? 1.0 : hx / (1.0 - x[i]);
      log1m_d[i] = i + 1 == n ? -INFINITY : std::log1p(-d[i]);
    }
  }
};

// Cell integrals C_i = ∫_0^{d_i} (1-u)^{e-1} h(u) du and ratios q_i = (1-d_i)^e,
// with h the quadratic through three neighbouring samples.
void cell_integrals(const Mesh& g, const std::vector<double>& hp, int e, std::vector<double>& C,
                    std::vector<double>& q) {
  const std::size_t n = g.n;
  const double ed = double(e);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = g.d[i];
    const double em = std::expm1(ed * g.log1m_d[i]);
    const double qi = 1.0 + em;
    const double M0 = -em / ed;
    const double M1 = (M0 - d * qi) / (ed + 1.0);
    const double M2 = (2.0 * M1 - d * d * qi) / (ed + 2.0);
    double c;
    if (i + 1 < n) {
      // h(s) = h0 + D1 s + D2 s(s-1)/2 with s = u/d
      const double h0 = hp[i], D1 = hp[i + 1] - hp[i], D2 = hp[i + 2] - 2.0 * hp[i + 1] + hp[i];
      c = h0 * M0 + D1 * M1 / d + 0.5 * D2 * (M2 / (d * d) - M1 / d);
    } else {
      // last cell: centred on x_i, h(s) = a + b s + c s^2
      const double a = hp[i];
      const double b = 0.5 * (hp[i + 1] - hp[i - 1]);
      const double cc = 0.5 * (hp[i + 1] - 2.0 * hp[i] + hp[i - 1]);
      c = a * M0 + b * M1 / d + cc * M2 / (d * d);
    }
    C[i] = c;
    q[i] = qi;
  }
}

// One level: h_{l-1} -> h_l.
void envelope_step(const Mesh& g, std::vector<double>& h, int l, std::vector<double>& C, std::vector<double>& q,
                   std::vector<double>& J) {
  const std::size_t n = g.n;
  const int e = l - 1;
  cell_integrals(g, h, e, C, q);
  // J_i = I(x_i)/(1-x_i)^e, I(x) = ∫_x^1 (1-y)^{e-1} h(y) dy.
  J[n] = h[n] / e;
  for (std::size_t i = n; i-- > 0;) J[i] = C[i] + q[i] * J[i + 1];
  for (std::size_t i = 0; i <= n; ++i) {
    const double I = i == n ? 0.0 : std::min(1.0, std::exp(e * g.log1m_x[i]) * J[i]);
    const double lI = l * I;
    // (1 - (1-I)^l)/(l I)
    const double phi = lI > 1e-12 ? -std::expm1(l * std::log1p(-I)) / lI : 1.0 - 0.5 * (l - 1) * I;
    h[i] = l * J[i] * phi;
  }
}

std::vector<double> iterate_envelope(double h1, int L, const Mesh& g) {
  std::vector<double> h(g.n + 1, h1), C(g.n), q(g.n), J(g.n + 1);
  for (int l = 2; l <= L; ++l) envelope_step(g, h, l, C, q, J);
  return h;
}

void check_grid(int L, int grid_n) {
  require(L >= 1, "L must be at least 1");
  require(grid_n >= 64, "grid must have at least 64 intervals");
}

EnvelopeFunction assemble(const Mesh& g, std::vector<double> h, int L, bool complement, std::string label) {
  EnvelopeFunction f;
  f.power = L - 1;
  f.complement = complement;
  f.reduced = GridFunction{0.0, 1.0, std::move(h), label + ":reduced"};
  std::vector<double> v(g.n + 1);
  for (std::size_t i = 0; i <= g.n; ++i) {
    const double env = f.power == 0 ? 1.0 : (i == g.n ? 0.0 : std::exp(f.power * g.log1m_x[i]));
    const double H = env * f.reduced.values[i];
    v[i] = complement ? 1.0 - H : H;
  }
  f.values = GridFunction{0.0, 1.0, std::move(v), std::move(label)};
  return f;
}

}  // namespace

double GridFunction::at(double t) const {
  const std::size_t n = intervals();
  require(n >= 2, "grid function needs at least two intervals");
  require(t >= a && t <= b, "evaluation point outside the grid");
  const double s = (t - a) / step();
  std::size_t i = std::min(static_cast<std::size_t>(s), n - 2);
  const double f = s - double(i);
  const double y0 = values[i], y1 = values[i + 1], y2 = values[i + 2];
  return y0 + f * (y1 - y0) + 0.5 * f * (f - 1.0) * (y2 - 2.0 * y1 + y0);
}

double EnvelopeFunction::at(double x) const {
  const double H = std::pow(1.0 - x, power) * reduced.at(x);
  return complement ? 1.0 - H : H;
}

EnvelopeFunction tree_gf(double lambda, int L, int grid_n) {
  check_grid(L, grid_n);
  require(lambda >= 0.0, "lambda must be non-negative");
  const Mesh g(static_cast<std::size_t>(grid_n));
  return assemble(g, iterate_envelope(-std::expm1(-lambda), L, g), L, true, "tree_gf");
}

EnvelopeFunction existence_prob(int L, int grid_n) {
  check_grid(L, grid_n);
  const Mesh g(static_cast<std::size_t>(grid_n));
  return assemble(g, iterate_envelope(1.0, L, g), L, false, "existence_prob");
}

double p_star(int L, int grid_n) {
  check_grid(L, grid_n);
  const Mesh g(static_cast<std::size_t>(grid_n));
  const auto h = iterate_envelope(1.0, L, g);
  // ∫_0^1 (1-x)^{L-1} h(x) dx: the suffix recurrence evaluated at x_0 = 0.
  std::vector<double> C(g.n), q(g.n);
  cell_integrals(g, h, L, C, q);
  double J = 0.0;
  for (std::size_t i = g.n; i-- > 0;) J = C[i] + q[i] * J;
  return J;
}

GridFunction fk_iterate(int k, double z_max, int grid_n) {
  require(k >= 0, "k must be non-negative");
  require(z_max > 0.0, "z_max must be positive");
  require(grid_n >= 2, "grid must have at least two intervals");
  const std::size_t n = static_cast<std::size_t>(grid_n);
  const double hz = z_max / double(n);
  // Carry S = -ln F so that 1 - F = -expm1(-S) keeps precision near z = 0.
  std::vector<double> S(n + 1), g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) S[i] = hz * double(i);
  for (int j = 1; j <= k; ++j) {
    g[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) g[i] = -std::expm1(-S[i]) / (hz * double(i));
    S[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) S[i] = S[i - 1] + 0.5 * hz * (g[i - 1] + g[i]);
  }
  std::vector<double> F(n + 1);
  for (std::size_t i = 0; i <= n; ++i) F[i] = std::exp(-S[i]);
  return GridFunction{0.0, z_max, std::move(F), "F_" + std::to_string(k)};
}

double delta0(double z) {
  require(z >= 0.0, "z must be non-negative");
  const double w = (1.0 + z) * (1.0 + z);
  if (z < 0.1) {
    // 1 - (1+z)e^{-z} = Σ_{n>=2} (-1)^n (n-1) z^n / n!, divided by z^2
    double sum = 0.0, pw = 1.0, fact = 2.0;
    for (int m = 2; m <= 16; ++m) {
      if (m > 2) {
        pw *= -z;
        fact *= m;
      }
      sum += (m - 1) * pw / fact;
    }
    return w * sum;
  }
  return w * (-std::expm1(-z) - z * std::exp(-z)) / (z * z);
}

GridFunction delta_iterate(int k, double z_max, int grid_n) {
  require(k >= 0, "k must be non-negative");
  require(z_max > 0.0, "z_max must be positive");
  require(grid_n >= 2, "grid must have at least two intervals");
  const std::size_t n = static_cast<std::size_t>(grid_n);
  const double hz = z_max / double(n);
  std::vector<double> delta(n + 1), w(n + 1);
  for (std::size_t i = 0; i <= n; ++i) delta[i] = delta0(hz * double(i));
  for (int j = 1; j <= k; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      const double z = hz * double(i);
      w[i] = z * delta[i] / ((1.0 + z) * (1.0 + z) * (1.0 + z));
    }
    const double scale = std::ldexp(1.0, -(j - 1));
    const double two_j = std::ldexp(1.0, j);
    double E = 0.0;
    // δ_j(0) = δ_{j-1}(0), so delta[0] stays.
    for (std::size_t i = 1; i <= n; ++i) {
      E += 0.5 * hz * (w[i - 1] + w[i]) * scale;
      const double z = hz * double(i);
      delta[i] = two_j * (1.0 + z) * (1.0 + z) / (z * z) * -std::expm1(-E);
    }
  }
  return GridFunction{0.0, z_max, std::move(delta), "delta_" + std::to_string(k)};
}

DeltaReport delta_bound_check(int k_max, double z_max, int grid_n, double tolerance) {
  require(k_max >= 0, "k_max must be non-negative");
  DeltaReport r;
  r.tolerance = tolerance;
  const GridFunction d0 = delta_iterate(0, z_max, grid_n);
  const auto it = std::max_element(d0.values.begin(), d0.values.end());
  r.M = *it;
  r.z_at_M = d0.node(static_cast<std::size_t>(it - d0.values.begin()));
  for (int k = 0; k <= k_max; ++k) {
    const GridFunction dk = delta_iterate(k, z_max, grid_n);
    const GridFunction fk = fk_iterate(k, z_max, grid_n);
    DeltaLevel lvl;
    lvl.k = k;
    lvl.min = *std::min_element(dk.values.begin(), dk.values.end());
    lvl.max = *std::max_element(dk.values.begin(), dk.values.end());
    lvl.at_one = z_max >= 1.0 ? dk.at(1.0) : NAN;
    const double two_k = std::ldexp(1.0, k);
    for (std::size_t i = 0; i < dk.values.size(); ++i) {
      const double z = dk.node(i);
      const double v = dk.values[i];
      if (v < -tolerance || v > r.M + tolerance) r.violations.push_back({k, z, v});
      if (z >= 0.5) {
        const double w = 1.0 + z;
        const double from_f = two_k * w * w * w / (z * z) * (1.0 / w - fk.values[i]);
        lvl.route_gap = std::max(lvl.route_gap, std::fabs(from_f - v));
      }
    }
    r.levels.push_back(lvl);
  }
  return r;
}

}  // namespace pathscape
