#pragma once

#include "mmd/kernels.hpp"
#include "mmd/types.hpp"

#include <vector>

namespace mmd {

// Neumaier-compensated accumulator; keeps streaming reductions within the
// 1e-12 oracle-equivalence contract up to n ~ 1e4.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Streaming decomposition of the martingale statistic. row_sums[k] holds
// sum_{j<i} H(Z_i, Z_j) for the 1-based pair index i = k + 2, so
//   T_n     = (1/n)   * sum_i row_sums/i,
//   sigma^2 = (1/n^2) * sum_i (row_sums/i)^2,
//   eta     = T_n / sigma_n (finite iff sigma_n > 0).
struct MmdBreakdown {
  std::vector<double> row_sums;
  double t_n = 0.0;
  double sigma_n = 0.0;
  double eta_n = 0.0;
  bool degenerate = false;
};

MmdBreakdown compute_mmd_breakdown(const PairedDataset& data, const ResolvedKernel& k);

// One pass over the strict lower triangle: row_sums[i-1] = sum_{j<i} H(Z_i, Z_j)
// in 0-based indices. Exactly one eval_H per unordered pair. Shared by the
// breakdown, the gamma family, and the brute-force oracles' counterpart.
std::vector<double> collect_row_sums(const PairedDataset& data, const ResolvedKernel& k);

// T_{n,gamma} = n^{gamma-2} sum_i i^{-gamma} sum_{j<i} H, with the
// self-normalized form numerator/denominator used by the test.
struct GammaStatistic {
  double gamma = 1.0;
  double numerator = 0.0;    // sum_i i^{-gamma} row_sums[i]
  double denominator = 0.0;  // sqrt(sum_i (i^{-gamma} row_sums[i])^2)
  double standardized = 0.0;
  double t_n_gamma = 0.0;    // numerator / n^{2-gamma}
  bool degenerate = false;
};

GammaStatistic compute_gamma_statistic(const PairedDataset& data, const ResolvedKernel& k,
                                       double gamma);
GammaStatistic gamma_statistic_from_row_sums(const std::vector<double>& row_sums, Index n,
                                             double gamma);

TestOutcome mmd_test(const PairedDataset& data, const KernelSpec& spec, double alpha);
TestOutcome gamma_test(const PairedDataset& data, const KernelSpec& spec, double gamma,
                       double alpha);

// Plug-in moments for the alternative-distribution variance check:
// mmd_sq_hat is the mean of H over distinct aux pairs, var_h_hat the sample
// variance of the centered conditional means h_hat(W_a).
struct HMoments {
  double mmd_sq_hat = 0.0;
  double var_h_hat = 0.0;
};

HMoments estimate_h_moments(const PairedDataset& aux, const ResolvedKernel& k);

}  // namespace mmd
