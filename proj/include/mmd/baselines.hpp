#pragma once

#include "mmd/statcore.hpp"

#include <cstdint>

namespace mmd {

struct PermutationPlan {
  int num_perms = 200;
  std::uint64_t seed = 0;
};

// (1/n^2) sum_{i != j} H(Z_i, Z_j); identically 2*T_{n,0}.
double quad_mmd_statistic(const PairedDataset& data, const ResolvedKernel& k);

// Unbiased within-range estimate sum_{i != j in [begin,end)} H / (m(m-1)).
// Building block of the block test.
double unbiased_mmd_sq(const PairedDataset& data, const ResolvedKernel& k, Index begin,
                       Index end);

// Quadratic-time MMD calibrated by pooled relabelings. The pooled kernel
// matrix is computed once per call; each relabeling re-pairs positionally and
// re-assembles the statistic from cached entries.
TestOutcome permutation_mmd_test(const PairedDataset& data, const KernelSpec& spec,
                                 const PermutationPlan& plan, double alpha);

// Consecutive complete blocks of block_size pairs (remainder dropped);
// studentized mean of per-block unbiased statistics against z_{1-alpha}.
TestOutcome block_mmd_test(const PairedDataset& data, const KernelSpec& spec,
                           Index block_size, double alpha);

// Studentized mean of H over the disjoint pairs (Z_1,Z_2), (Z_3,Z_4), ...
TestOutcome linear_mmd_test(const PairedDataset& data, const KernelSpec& spec, double alpha);

// Split-half statistic: u_i = mean_{j in B} H(Z_i, Z_j) for i in the first
// half A, studentized over A. An approximation of the cross-MMD construction.
TestOutcome cross_mmd_test(const PairedDataset& data, const KernelSpec& spec, double alpha);

}  // namespace mmd
