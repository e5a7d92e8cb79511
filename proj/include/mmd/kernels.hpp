#pragma once

#include "mmd/types.hpp"

#include <vector>

namespace mmd {

enum class KernelFamily { Gaussian, Laplace, Linear };

std::string to_string(KernelFamily f);

// How a kernel bandwidth is obtained. The minimax rule resolves to the
// rate-style scale nu_n = n^{4/(d+4*beta)} and is Gaussian-only.
struct BandwidthRule {
  enum class Kind { Fixed, MedianHeuristic, MinimaxGaussian };

  Kind kind = Kind::MedianHeuristic;
  double lambda = 1.0;  // Fixed
  double factor = 1.0;  // MedianHeuristic: multiplier on the pooled median
  double beta = 2.0;    // MinimaxGaussian smoothness
  Index n = 0;          // MinimaxGaussian sample size
  int d = 0;            // MinimaxGaussian dimension

  static BandwidthRule fixed(double lambda);
  static BandwidthRule median(double factor = 1.0);
  static BandwidthRule minimax_gaussian(double beta, Index n, int d);
};

struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  BandwidthRule bandwidth;
};

// Kernel with its scale pinned down. The Gaussian is parameterized as
// exp(-||x-y||^2 / (2*lambda^2)); the minimax nu-form exp(-nu*||x-y||^2)
// is stored via lambda = 1/sqrt(2*nu). Laplace is exp(-||x-y||_1 / lambda).
// Linear is the plain dot product (scale unused, kept at 1).
class ResolvedKernel {
 public:
  ResolvedKernel(KernelFamily family, double scale);

  KernelFamily family() const { return family_; }
  double scale() const { return scale_; }

  double eval(const double* x, const double* y, Index d) const;

  // From precomputed raw pair statistics (fused multi-kernel pass).
  double from_sq_l2(double sq) const;   // Gaussian
  double from_l1(double dist) const;    // Laplace
  double from_dot(double dot) const;    // Linear

 private:
  KernelFamily family_;
  double scale_;
  double coef_;  // Gaussian: 1/(2*lambda^2); Laplace: 1/lambda
};

// Checked evaluation (dimension + finiteness); the overloads above skip the
// checks for inner loops over validated datasets.
double eval_kernel(const ResolvedKernel& k, Eigen::Ref<const Eigen::VectorXd> x,
                   Eigen::Ref<const Eigen::VectorXd> y);

// Median of the m(m-1)/2 pairwise Euclidean distances among pooled rows;
// even counts take the lower-middle order statistic. Errors when the median
// distance is zero (bandwidth must stay positive).
double median_heuristic(const SampleMatrix& pooled);

ResolvedKernel resolve_bandwidth(const KernelSpec& spec, const SampleMatrix& x,
                                 const SampleMatrix& y);

std::vector<ResolvedKernel> resolve_bandwidths(const std::vector<KernelSpec>& specs,
                                               const SampleMatrix& x,
                                               const SampleMatrix& y);

// H(z1, z2) = K(x1,x2) - K(x1,y2) - K(x2,y1) + K(y1,y2).
double eval_H(const ResolvedKernel& k, Eigen::Ref<const Eigen::VectorXd> x1,
              Eigen::Ref<const Eigen::VectorXd> y1,
              Eigen::Ref<const Eigen::VectorXd> x2,
              Eigen::Ref<const Eigen::VectorXd> y2);

// Fast path over validated paired data.
double eval_H(const ResolvedKernel& k, const PairedDataset& z, Index i, Index j);

}  // namespace mmd
