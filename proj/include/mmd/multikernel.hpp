#pragma once

#include "mmd/statcore.hpp"

#include <vector>

namespace mmd {

// Multi-kernel martingale MMD: the vector of per-kernel T_n values, their
// cross-kernel normalization matrix, and the Mahalanobis combination that is
// chi-squared(r) under the null.
struct MultiKernelResult {
  Eigen::VectorXd t_vec;      // T_n per kernel
  Eigen::MatrixXd sigma_mat;  // sigma(a,b) = (1/n^2) sum_i (rs_a/i)(rs_b/i)
  double mahalanobis = 0.0;
  bool degenerate = false;
  int r = 0;
};

// One fused pass over pairs; every pair evaluates all r kernels, reusing the
// per-family raw distances across bandwidths.
MultiKernelResult compute_mmmmd(const PairedDataset& data,
                                const std::vector<ResolvedKernel>& kernels);

TestOutcome mmmmd_test(const PairedDataset& data, const std::vector<KernelSpec>& specs,
                       double alpha);

}  // namespace mmd
