#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "pathscape/errors.hpp"
#include "pathscape/rng.hpp"
#include "pathscape/stats.hpp"

using namespace pathscape;

namespace {

double bessel_survival(double z) {
  const double s = 2 * std::sqrt(z);
  return s * boost::math::cyl_bessel_k(1, s);
}

}  // namespace

TEST_CASE("samples are sorted and validated") {
  const Sample s({3.0, 1.0, 2.0});
  CHECK(s.values() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THROWS_AS(Sample({}), DomainError);
  CHECK_THROWS_AS(Sample({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
  CHECK_THROWS_AS(Sample({std::numeric_limits<double>::infinity()}), DomainError);
}

TEST_CASE("KS statistic at midpoint quantiles") {
  constexpr int n = 1000;
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(-std::log(1 - (i - 0.5) / n));
  CHECK(ks_statistic(Sample(v), ReferenceLaw::exponential(1.0)) == doctest::Approx(0.5 / n).epsilon(1e-9));
  CHECK(ks_statistic(Sample({0.5}), [](double t) { return t; }) == doctest::Approx(0.5));
}

TEST_CASE("KS statistic for a genuine exponential sample") {
  constexpr int n = 100000;
  SplitMix64 rng(31);
  std::vector<double> v, u;
  for (int i = 0; i < n; ++i) {
    v.push_back(-2.0 * std::log1p(-rng.uniform()));
    u.push_back(1 - std::exp(-v.back() / 2));
  }
  const double d = ks_statistic(Sample(v), ReferenceLaw::exponential(2.0));
  CHECK(d < 1.95 / std::sqrt(double(n)));
  // the statistic is invariant under the probability integral transform
  CHECK(ks_statistic(Sample(u), [](double t) { return std::clamp(t, 0.0, 1.0); }) ==
        doctest::Approx(d).epsilon(1e-9));
  CHECK(ks_statistic(Sample(v), ReferenceLaw::exponential(1.0)) > 0.2);
}

TEST_CASE("reference laws") {
  CHECK(ReferenceLaw::exponential(2.0).cdf(2.0) == doctest::Approx(1 - std::exp(-1.0)));
  CHECK(ReferenceLaw::exponential(2.0).cdf(-1.0) == 0.0);
  CHECK(ReferenceLaw::product_exponential(3.0).cdf(1.5) == doctest::Approx(prodexp_cdf(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(ReferenceLaw::exponential(0.0), DomainError);
  CHECK(!ReferenceLaw::exponential(1.0).name().empty());
  CHECK(ReferenceLaw::exponential(1.0).name() != ReferenceLaw::product_exponential(1.0).name());
}

TEST_CASE("product of two exponentials") {
  CHECK(prodexp_cdf(0.0) == 0.0);
  CHECK(prodexp_survival(0.0) == 1.0);
  for (double z : {1e-8, 1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 80.0}) {
    const double want = bessel_survival(z);
    CHECK(std::abs(prodexp_survival(z) - want) <= 1e-10 * want);
    CHECK(prodexp_cdf(z) + prodexp_survival(z) == doctest::Approx(1.0).epsilon(1e-15));
  }
  double prev = 0.0;
  for (double z = 0.0; z < 20.0; z += 0.05) {
    const double c = prodexp_cdf(z);
    REQUIRE(c >= prev);
    prev = c;
  }
  // E[E1 E2] = 1
  boost::math::quadrature::exp_sinh<double> q;
  CHECK(q.integrate([](double z) { return prodexp_survival(z); }) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(prodexp_cdf(-1.0), DomainError);
}

TEST_CASE("product of two exponentials by simulation") {
  constexpr int n = 1000000;
  SplitMix64 rng(8);
  std::vector<double> prod(n);
  for (auto& p : prod) p = std::log1p(-rng.uniform()) * std::log1p(-rng.uniform());
  for (double z : {0.1, 1.0, 5.0}) {
    std::vector<double> ind;
    ind.reserve(n);
    for (double p : prod) ind.push_back(p > z ? 1.0 : 0.0);
    const auto m = moment_summary(ind);
    CHECK(within_se(m.mean, prodexp_survival(z), m.se_mean));
  }
}

TEST_CASE("moment summary") {
  const auto m = moment_summary({1.0, 2.0, 3.0, 4.0});
  CHECK(m.n == 4);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.se_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  // μ2 = 5/4, μ4 = 41/16
  CHECK(m.se_variance == doctest::Approx(std::sqrt((41.0 / 16 - 1.0 / 3.0 * 25.0 / 16) / 4)));
  const auto c = moment_summary({2.0, 2.0, 2.0});
  CHECK(c.variance == 0.0);
  CHECK(c.se_mean == 0.0);
  CHECK_THROWS_AS(moment_summary({1.0}), DomainError);
  CHECK(within_se(1.0, 1.3, 0.1));
  CHECK_FALSE(within_se(1.0, 1.5, 0.1));
  CHECK(within_se(1.0, 1.0, 0.0));
}
