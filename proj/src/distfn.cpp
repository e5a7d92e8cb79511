#include "mmd/distfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kInvSqrtPi = 0.5641895835477563;

// erf(z) for z in [0, ~3): all-positive-term series
// erf(z) = (2/sqrt(pi)) e^{-z^2} sum_k (2z^2)^k z / (2k+1)!!
double erf_series(double z) {
  const double z2 = z * z;
  double term = z;
  double sum = z;
  for (int k = 1; k < 200; ++k) {
    term *= 2.0 * z2 / (2.0 * k + 1.0);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return 2.0 * kInvSqrtPi * std::exp(-z2) * sum;
}

// erfc(z) for z >= ~2 via the Laplace continued fraction (modified Lentz):
// erfc(z) = e^{-z^2}/sqrt(pi) * 1/(z + (1/2)/(z + (2/2)/(z + ...)))
double erfc_cf(double z) {
  const double tiny = 1e-300;
  double f = z;
  double c = f;
  double d = 0.0;
  for (int k = 1; k < 300; ++k) {
    const double a = 0.5 * k;
    d = z + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return kInvSqrtPi * std::exp(-z * z) / f;
}

double erfc_pos(double z) {
  if (z < 2.0) return 1.0 - erf_series(z);
  if (z > 27.0) return 0.0;  // below double underflow of exp(-z^2)
  return erfc_cf(z);
}

// Lanczos (g = 7, n = 9) log-gamma, valid for a > 0.
double log_gamma(double a) {
  static const double coef[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  const double g = 7.0;
  double x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (a - 1.0 + i);
  const double t = a - 0.5 + g;
  return 0.5 * std::log(2.0 * M_PI) + (a - 0.5) * std::log(t) - t + std::log(x);
}

// Series for P(a,x), x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int k = 0; k < 1000; ++k) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Continued fraction for Q(a,x), x >= a + 1 (modified Lentz).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int k = 1; k < 1000; ++k) {
    const double an = -k * (k - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return f * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Acklam's rational approximation to the normal quantile; refined by Halley
// steps in std_normal_quantile below.
double normal_quantile_seed(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("std_normal_cdf: non-finite input");
  const double z = -x / kSqrt2;  // Phi(x) = erfc(-x/sqrt(2))/2
  if (z >= 0.0) return 0.5 * erfc_pos(z);
  return 1.0 - 0.5 * erfc_pos(-z);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("std_normal_quantile: p outside (0,1)");
  double x = normal_quantile_seed(p);
  // Halley refinement against the high-accuracy CDF.
  for (int it = 0; it < 4; ++it) {
    const double err = std_normal_cdf(x) - p;
    const double pdf = std_normal_pdf(x);
    if (pdf <= 0.0) break;
    const double u = err / pdf;
    const double step = u / (1.0 + 0.5 * x * u);
    x -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("regularized_gamma_p: bad arguments");
  }
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(int r, double x) {
  if (r < 1) throw std::invalid_argument("chi2_cdf: r must be >= 1");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * r, 0.5 * x);
}

double chi2_quantile(int r, double p) {
  if (r < 1) throw std::invalid_argument("chi2_quantile: r must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("chi2_quantile: p outside (0,1)");

  // Wilson-Hilferty start.
  const double z = std_normal_quantile(p);
  const double t = 1.0 - 2.0 / (9.0 * r) + z * std::sqrt(2.0 / (9.0 * r));
  double x = r * t * t * t;
  if (!(x > 0.0)) x = 0.5 * r * 1e-3;

  // Newton with a bisection bracket as safeguard.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  const double a = 0.5 * r;
  const double log_norm = -a * std::log(2.0) - log_gamma(a);
  for (int it = 0; it < 100; ++it) {
    const double f = chi2_cdf(r, x) - p;
    if (f > 0.0) {
      hi = std::min(hi, x);
    } else {
      lo = std::max(lo, x);
    }
    const double log_pdf = log_norm + (a - 1.0) * std::log(x) - 0.5 * x;
    const double pdf = std::exp(log_pdf);
    double next = x;
    if (pdf > 0.0 && std::isfinite(pdf)) next = x - f / pdf;
    if (!(next > lo && (next < hi))) {
      next = std::isfinite(hi) ? 0.5 * (lo + hi) : (lo > 0.0 ? 2.0 * lo : 1.0);
    }
    if (std::abs(next - x) <= 1e-14 * std::max(1.0, x)) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

EmpiricalSample::EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("EmpiricalSample: empty sample");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalSample: non-finite entry");
  }
  std::sort(values_.begin(), values_.end());
}

double ks_distance(const EmpiricalSample& sample,
                   const std::function<double(double)>& cdf) {
  const auto& v = sample.values();
  const double m = static_cast<double>(v.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    sup = std::max(sup, std::abs((i + 1.0) / m - f));
    sup = std::max(sup, std::abs(static_cast<double>(i) / m - f));
  }
  return sup;
}

}  // namespace mmd
