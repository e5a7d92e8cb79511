#include "mmd/multikernel.hpp"

#include "mmd/datagen.hpp"
#include "mmd/distfn.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace mmd;

TEST_CASE("r=1 reduces to the squared normalized statistic") {
  const PairedDataset data = generate(GeneratorSpec::gaussian_mean_shift(3, 1, 0.5, 40, 2));
  const ResolvedKernel k(KernelFamily::Gaussian, 1.0);
  const MmdBreakdown b = compute_mmd_breakdown(data, k);
  const MultiKernelResult res = compute_mmmmd(data, {k});
  REQUIRE_FALSE(res.degenerate);
  CHECK(std::abs(res.mahalanobis - b.eta_n * b.eta_n) <= 1e-10 * std::max(1.0, b.eta_n * b.eta_n));
  CHECK(std::abs(res.sigma_mat(0, 0) - b.sigma_n * b.sigma_n) <= 1e-12);
}

TEST_CASE("duplicate kernels are rank deficient and degenerate") {
  const PairedDataset data = generate(GeneratorSpec::std_gaussian(4, 30, 9));
  const ResolvedKernel k(KernelFamily::Gaussian, 1.0);
  const MultiKernelResult res = compute_mmmmd(data, {k, k});
  CHECK(res.degenerate);

  const std::vector<KernelSpec> specs(2, KernelSpec{KernelFamily::Gaussian, BandwidthRule::fixed(1.0)});
  const TestOutcome out = mmmmd_test(data, specs, 0.05);
  CHECK(out.degenerate);
  CHECK_FALSE(out.reject);
}

TEST_CASE("fused pass matches the brute-force reference across mixed families") {
  for (int t = 0; t < 6; ++t) {
    const int n = 16 + 8 * t;
    const PairedDataset data =
        generate(GeneratorSpec::gaussian_mean_shift(3, 2, 0.3, n, 500 + t));
    const std::vector<ResolvedKernel> kernels = {
        ResolvedKernel(KernelFamily::Gaussian, 0.7),
        ResolvedKernel(KernelFamily::Laplace, 1.2),
        ResolvedKernel(KernelFamily::Linear, 1.0),
    };
    const MultiKernelResult res = compute_mmmmd(data, kernels);
    const auto sigma = oracle::sigma_matrix(data, kernels);
    for (int a = 0; a < 3; ++a) {
      CHECK(oracle::rel_close(res.t_vec(a), oracle::t_vec_entry(data, kernels[a]), 1e-12));
      for (int b = 0; b < 3; ++b) {
        CHECK(oracle::rel_close(res.sigma_mat(a, b),
                                sigma[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
                                1e-10));
      }
    }
    // diagonal equals the per-kernel sigma_n^2
    for (int a = 0; a < 3; ++a) {
      const MmdBreakdown b = compute_mmd_breakdown(data, kernels[a]);
      CHECK(oracle::rel_close(res.sigma_mat(a, a), b.sigma_n * b.sigma_n, 1e-12));
    }
  }
}

TEST_CASE("scaled-median Gaussian bank against the reference") {
  const PairedDataset data = generate(GeneratorSpec::std_gaussian(5, 48, 77));
  SampleMatrix pooled(data.n() * 2, data.dim());
  pooled.topRows(data.n()) = data.x();
  pooled.bottomRows(data.n()) = data.y();
  const double med = median_heuristic(pooled);
  const std::vector<ResolvedKernel> kernels = {
      ResolvedKernel(KernelFamily::Gaussian, 1.0 * med),
      ResolvedKernel(KernelFamily::Gaussian, 2.0 * med),
      ResolvedKernel(KernelFamily::Gaussian, 4.0 * med),
  };
  const MultiKernelResult res = compute_mmmmd(data, kernels);
  REQUIRE_FALSE(res.degenerate);
  const auto sigma = oracle::sigma_matrix(data, kernels);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(oracle::rel_close(res.sigma_mat(a, b),
                              sigma[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
                              1e-10));
    }
  }
}

TEST_CASE("sigma is positive semidefinite and permutation-consistent") {
  const PairedDataset data = generate(GeneratorSpec::gaussian_mean_shift(4, 2, 0.4, 36, 3));
  const std::vector<ResolvedKernel> kernels = {
      ResolvedKernel(KernelFamily::Gaussian, 0.6),
      ResolvedKernel(KernelFamily::Gaussian, 1.4),
      ResolvedKernel(KernelFamily::Laplace, 1.0),
  };
  const MultiKernelResult res = compute_mmmmd(data, kernels);
  REQUIRE_FALSE(res.degenerate);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(res.sigma_mat);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * res.sigma_mat.trace());

  // permuting the kernel list permutes t and conjugates sigma; mahalanobis invariant
  const std::vector<ResolvedKernel> permuted = {kernels[2], kernels[0], kernels[1]};
  const MultiKernelResult res_p = compute_mmmmd(data, permuted);
  REQUIRE_FALSE(res_p.degenerate);
  CHECK(res_p.t_vec(1) == res.t_vec(0));
  CHECK(res_p.t_vec(2) == res.t_vec(1));
  CHECK(res_p.t_vec(0) == res.t_vec(2));
  CHECK(res_p.sigma_mat(1, 2) == res.sigma_mat(0, 1));
  CHECK(oracle::rel_close(res_p.mahalanobis, res.mahalanobis, 1e-9));
}

TEST_CASE("mmmmd_test thresholds come from chi-squared quantiles") {
  const PairedDataset data = generate(GeneratorSpec::gaussian_mean_shift(3, 1, 0.6, 50, 12));
  const std::vector<KernelSpec> one = {{KernelFamily::Gaussian, BandwidthRule::median()}};
  const TestOutcome out1 = mmmmd_test(data, one, 0.05);
  CHECK(out1.threshold == doctest::Approx(3.841458820694126).epsilon(1e-7));

  std::vector<KernelSpec> three;
  for (double f : {1.0, 2.0, 4.0}) {
    three.push_back({KernelFamily::Gaussian, BandwidthRule::median(f)});
  }
  const TestOutcome out3 = mmmmd_test(data, three, 0.05);
  CHECK(out3.threshold == doctest::Approx(chi2_quantile(3, 0.95)).epsilon(1e-12));
  CHECK(out3.p_value == doctest::Approx(1.0 - chi2_cdf(3, out3.statistic)).epsilon(1e-12));
}
