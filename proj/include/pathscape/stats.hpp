#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pathscape {

/// Observations sorted ascending; at least one, all finite.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

enum class LawTag { Exponential, ProductExponential };

struct ReferenceLaw {
  LawTag tag = LawTag::Exponential;
  double scale = 1.0;  // mean for the exponential, scale of E1·E2 otherwise

  static ReferenceLaw exponential(double mean);
  static ReferenceLaw product_exponential(double scale);

  double cdf(double x) const;
  std::string name() const;
};

/// sup |ECDF - F| by the two-sided order-statistic formula
/// max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
double ks_statistic(const Sample& s, const std::function<double(double)>& cdf);
double ks_statistic(const Sample& s, const ReferenceLaw& law);

/// P(E1 E2 > z) = ∫_0^∞ e^{-t - z/t} dt, by adaptive Gauss-Kronrod split at
/// the peak t = sqrt(z).  Equals 2 sqrt(z) K_1(2 sqrt(z)).
double prodexp_survival(double z);
/// P(E1 E2 <= z) for independent standard exponentials.  z >= 0.
double prodexp_cdf(double z);

struct MomentSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se_mean = 0.0;
  double se_variance = 0.0;  // from the fourth central moment
};

/// n >= 2.
MomentSummary moment_summary(const std::vector<double>& values);

/// |observed - expected| <= z · se, the CLT gate used throughout.
bool within_se(double observed, double expected, double se, double z = 4.0);

}  // namespace pathscape
