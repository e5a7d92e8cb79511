#pragma once

#include <functional>
#include <vector>

// Special functions for calibration: normal and chi-squared CDFs/quantiles,
// Kolmogorov-Smirnov distance. Implemented in-house (exp/log/sqrt only) so
// thresholds are bit-stable across platforms.

namespace mmd {

double std_normal_pdf(double x);

// Absolute error <= 1e-10 (in practice ~1e-15).
double std_normal_cdf(double x);

// Inverse of std_normal_cdf on (0,1); |Phi(result) - p| <= 1e-10.
double std_normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

double chi2_cdf(int r, double x);

// Inverse chi-squared CDF, Newton iteration from a Wilson-Hilferty start.
double chi2_quantile(int r, double p);

// Sorted finite sample for empirical-distribution checks.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> values);  // sorts, rejects non-finite
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// sup_i max(|i/m - F(x_i)|, |(i-1)/m - F(x_i)|) over the sorted sample.
double ks_distance(const EmpiricalSample& sample,
                   const std::function<double(double)>& cdf);

}  // namespace mmd
