#include "pathscape/stats.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>

#include "pathscape/errors.hpp"

namespace pathscape {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  require(!values_.empty(), "sample must not be empty");
  for (double v : values_) require(std::isfinite(v), "sample values must be finite");
  std::sort(values_.begin(), values_.end());
}

ReferenceLaw ReferenceLaw::exponential(double mean) {
  require(mean > 0.0, "exponential mean must be positive");
  return ReferenceLaw{LawTag::Exponential, mean};
}

ReferenceLaw ReferenceLaw::product_exponential(double scale) {
  require(scale > 0.0, "scale must be positive");
  return ReferenceLaw{LawTag::ProductExponential, scale};
}

double ReferenceLaw::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (tag == LawTag::Exponential) return -std::expm1(-x / scale);
  return prodexp_cdf(x / scale);
}

std::string ReferenceLaw::name() const {
  return tag == LawTag::Exponential ? "exponential" : "product-exponential";
}

double ks_statistic(const Sample& s, const std::function<double(double)>& cdf) {
  const auto& v = s.values();
  const double n = double(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double F = cdf(v[i]);
    d = std::max({d, double(i + 1) / n - F, F - double(i) / n});
  }
  return d;
}

double ks_statistic(const Sample& s, const ReferenceLaw& law) {
  return ks_statistic(s, [&](double x) { return law.cdf(x); });
}

double prodexp_survival(double z) {
  require(z >= 0.0, "z must be non-negative");
  if (z == 0.0) return 1.0;
  using boost::math::quadrature::gauss_kronrod;
  const auto f = [z](double t) { return t <= 0.0 ? 0.0 : std::exp(-t - z / t); };
  const double peak = std::sqrt(z);
  constexpr double kTol = 1e-13;
  // t = z/u folds [0, peak] onto [peak, inf), away from the steep front at 0
  const auto g = [z](double u) { return z / (u * u) * std::exp(-u - z / u); };
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const auto& h : {std::function<double(double)>(f), std::function<double(double)>(g)}) {
    if (peak < 1.0) {
      total += gauss_kronrod<double, 61>::integrate(h, peak, 1.0, 20, kTol);
      total += gauss_kronrod<double, 61>::integrate(h, 1.0, inf, 20, kTol);
    } else {
      total += gauss_kronrod<double, 61>::integrate(h, peak, inf, 20, kTol);
    }
  }
  return total;
}

double prodexp_cdf(double z) {
  require(z >= 0.0, "z must be non-negative");
  return 1.0 - prodexp_survival(z);
}

MomentSummary moment_summary(const std::vector<double>& values) {
  require(values.size() >= 2, "moment summary needs at least two values");
  MomentSummary m;
  m.n = values.size();
  const double n = double(m.n);
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m.variance = m2 / (n - 1.0);
  m.se_mean = std::sqrt(m.variance / n);
  const double mu2 = m2 / n, mu4 = m4 / n;
  // Var(s^2) = (μ4 - (n-3)/(n-1) σ^4)/n
  m.se_variance = std::sqrt(std::max(0.0, (mu4 - (n - 3.0) / (n - 1.0) * mu2 * mu2) / n));
  return m;
}

bool within_se(double observed, double expected, double se, double z) {
  return std::fabs(observed - expected) <= z * se;
}

}  // namespace pathscape
