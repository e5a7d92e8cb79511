#include "mmd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmd {

std::string to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::Laplace: return "laplace";
    case KernelFamily::Linear: return "linear";
  }
  return "unknown";
}

BandwidthRule BandwidthRule::fixed(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("BandwidthRule: fixed bandwidth must be positive");
  }
  BandwidthRule r;
  r.kind = Kind::Fixed;
  r.lambda = lambda;
  return r;
}

BandwidthRule BandwidthRule::median(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("BandwidthRule: median factor must be positive");
  }
  BandwidthRule r;
  r.kind = Kind::MedianHeuristic;
  r.factor = factor;
  return r;
}

BandwidthRule BandwidthRule::minimax_gaussian(double beta, Index n, int d) {
  if (!(beta > 0.0)) throw std::invalid_argument("BandwidthRule: beta must be positive");
  if (n < 1) throw std::invalid_argument("BandwidthRule: n must be positive");
  if (d < 1) throw std::invalid_argument("BandwidthRule: d must be positive");
  BandwidthRule r;
  r.kind = Kind::MinimaxGaussian;
  r.beta = beta;
  r.n = n;
  r.d = d;
  return r;
}

ResolvedKernel::ResolvedKernel(KernelFamily family, double scale)
    : family_(family), scale_(scale), coef_(0.0) {
  if (family_ == KernelFamily::Linear) {
    scale_ = 1.0;
    return;
  }
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw std::invalid_argument("ResolvedKernel: bandwidth must be strictly positive");
  }
  coef_ = (family_ == KernelFamily::Gaussian) ? 0.5 / (scale_ * scale_) : 1.0 / scale_;
}

namespace {

double sq_l2(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index c = 0; c < d; ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s;
}

double l1(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index c = 0; c < d; ++c) s += std::abs(a[c] - b[c]);
  return s;
}

double dot(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index c = 0; c < d; ++c) s += a[c] * b[c];
  return s;
}

}  // namespace

double ResolvedKernel::eval(const double* x, const double* y, Index d) const {
  switch (family_) {
    case KernelFamily::Gaussian: return std::exp(-coef_ * sq_l2(x, y, d));
    case KernelFamily::Laplace: return std::exp(-coef_ * l1(x, y, d));
    case KernelFamily::Linear: return dot(x, y, d);
  }
  return 0.0;
}

double ResolvedKernel::from_sq_l2(double sq) const { return std::exp(-coef_ * sq); }
double ResolvedKernel::from_l1(double dist) const { return std::exp(-coef_ * dist); }
double ResolvedKernel::from_dot(double d) const { return d; }

double eval_kernel(const ResolvedKernel& k, Eigen::Ref<const Eigen::VectorXd> x,
                   Eigen::Ref<const Eigen::VectorXd> y) {
  if (x.size() != y.size()) throw std::invalid_argument("eval_kernel: dimension mismatch");
  if (!x.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("eval_kernel: non-finite coordinates");
  }
  return k.eval(x.data(), y.data(), x.size());
}

double median_heuristic(const SampleMatrix& pooled) {
  const Index m = pooled.rows();
  if (m < 2) throw std::invalid_argument("median_heuristic: need at least 2 rows");

  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      dists.push_back(std::sqrt(sq_l2(pooled.data() + i * pooled.cols(),
                                      pooled.data() + j * pooled.cols(), pooled.cols())));
    }
  }
  // Lower-middle order statistic so the bandwidth is an observed distance.
  const std::size_t mid = (dists.size() - 1) / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  const double med = dists[mid];
  if (!(med > 0.0)) {
    throw std::invalid_argument("median_heuristic: median pairwise distance is zero");
  }
  return med;
}

ResolvedKernel resolve_bandwidth(const KernelSpec& spec, const SampleMatrix& x,
                                 const SampleMatrix& y) {
  if (x.rows() == 0 || y.rows() == 0) {
    throw std::invalid_argument("resolve_bandwidth: empty sample");
  }
  if (x.cols() != y.cols()) {
    throw std::invalid_argument("resolve_bandwidth: dimension mismatch");
  }
  if (spec.family == KernelFamily::Linear) {
    return ResolvedKernel(KernelFamily::Linear, 1.0);
  }
  switch (spec.bandwidth.kind) {
    case BandwidthRule::Kind::Fixed:
      return ResolvedKernel(spec.family, spec.bandwidth.lambda);
    case BandwidthRule::Kind::MedianHeuristic: {
      SampleMatrix pooled(x.rows() + y.rows(), x.cols());
      pooled.topRows(x.rows()) = x;
      pooled.bottomRows(y.rows()) = y;
      return ResolvedKernel(spec.family, spec.bandwidth.factor * median_heuristic(pooled));
    }
    case BandwidthRule::Kind::MinimaxGaussian: {
      if (spec.family != KernelFamily::Gaussian) {
        throw std::invalid_argument("resolve_bandwidth: minimax rule requires the Gaussian family");
      }
      const double nu = std::pow(static_cast<double>(spec.bandwidth.n),
                                 4.0 / (spec.bandwidth.d + 4.0 * spec.bandwidth.beta));
      return ResolvedKernel(KernelFamily::Gaussian, 1.0 / std::sqrt(2.0 * nu));
    }
  }
  throw std::logic_error("resolve_bandwidth: unreachable");
}

std::vector<ResolvedKernel> resolve_bandwidths(const std::vector<KernelSpec>& specs,
                                               const SampleMatrix& x,
                                               const SampleMatrix& y) {
  std::vector<ResolvedKernel> out;
  out.reserve(specs.size());
  for (const auto& s : specs) out.push_back(resolve_bandwidth(s, x, y));
  return out;
}

double eval_H(const ResolvedKernel& k, Eigen::Ref<const Eigen::VectorXd> x1,
              Eigen::Ref<const Eigen::VectorXd> y1,
              Eigen::Ref<const Eigen::VectorXd> x2,
              Eigen::Ref<const Eigen::VectorXd> y2) {
  const Index d = x1.size();
  if (y1.size() != d || x2.size() != d || y2.size() != d) {
    throw std::invalid_argument("eval_H: dimension mismatch");
  }
  return eval_kernel(k, x1, x2) - eval_kernel(k, x1, y2) - eval_kernel(k, x2, y1) +
         eval_kernel(k, y1, y2);
}

double eval_H(const ResolvedKernel& k, const PairedDataset& z, Index i, Index j) {
  const Index d = z.dim();
  const double* xi = z.x_row(i);
  const double* yi = z.y_row(i);
  const double* xj = z.x_row(j);
  const double* yj = z.y_row(j);
  return k.eval(xi, xj, d) - k.eval(xi, yj, d) - k.eval(xj, yi, d) + k.eval(yi, yj, d);
}

}  // namespace mmd
