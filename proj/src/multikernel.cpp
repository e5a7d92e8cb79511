#include "mmd/multikernel.hpp"

#include "mmd/distfn.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mmd {

namespace {

struct RawPair {
  double sq[4];   // squared L2: xx, xy, yx, yy
  double ab[4];   // L1
  double dot[4];  // inner products
};

void raw_pair_stats(const PairedDataset& z, Index i, Index j, bool need_sq, bool need_l1,
                    bool need_dot, RawPair& out) {
  const Index d = z.dim();
  const double* p1[2] = {z.x_row(i), z.y_row(i)};
  const double* p2[2] = {z.x_row(j), z.y_row(j)};
  // Order: (x_i,x_j), (x_i,y_j), (x_j,y_i), (y_i,y_j).
  const double* lhs[4] = {p1[0], p1[0], p2[0], p1[1]};
  const double* rhs[4] = {p2[0], p2[1], p1[1], p2[1]};
  for (int t = 0; t < 4; ++t) {
    const double* a = lhs[t];
    const double* b = rhs[t];
    if (need_sq) {
      double s = 0.0;
      for (Index c = 0; c < d; ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
      }
      out.sq[t] = s;
    }
    if (need_l1) {
      double s = 0.0;
      for (Index c = 0; c < d; ++c) s += std::abs(a[c] - b[c]);
      out.ab[t] = s;
    }
    if (need_dot) {
      double s = 0.0;
      for (Index c = 0; c < d; ++c) s += a[c] * b[c];
      out.dot[t] = s;
    }
  }
}

double h_from_raw(const ResolvedKernel& k, const RawPair& raw) {
  switch (k.family()) {
    case KernelFamily::Gaussian:
      return k.from_sq_l2(raw.sq[0]) - k.from_sq_l2(raw.sq[1]) - k.from_sq_l2(raw.sq[2]) +
             k.from_sq_l2(raw.sq[3]);
    case KernelFamily::Laplace:
      return k.from_l1(raw.ab[0]) - k.from_l1(raw.ab[1]) - k.from_l1(raw.ab[2]) +
             k.from_l1(raw.ab[3]);
    case KernelFamily::Linear:
      return raw.dot[0] - raw.dot[1] - raw.dot[2] + raw.dot[3];
  }
  return 0.0;
}

}  // namespace

MultiKernelResult compute_mmmmd(const PairedDataset& data,
                                const std::vector<ResolvedKernel>& kernels) {
  const int r = static_cast<int>(kernels.size());
  if (r < 1) throw std::invalid_argument("compute_mmmmd: need at least one kernel");
  const Index n = data.n();

  bool need_sq = false, need_l1 = false, need_dot = false;
  for (const auto& k : kernels) {
    need_sq |= k.family() == KernelFamily::Gaussian;
    need_l1 |= k.family() == KernelFamily::Laplace;
    need_dot |= k.family() == KernelFamily::Linear;
  }

  std::vector<KahanSum> t_acc(kernels.size());
  std::vector<KahanSum> s_acc(kernels.size() * kernels.size());
  std::vector<KahanSum> row(kernels.size());
  std::vector<double> w(kernels.size());
  RawPair raw{};

  for (Index i = 1; i < n; ++i) {
    for (auto& acc : row) acc = KahanSum{};
    for (Index j = 0; j < i; ++j) {
      raw_pair_stats(data, i, j, need_sq, need_l1, need_dot, raw);
      for (std::size_t l = 0; l < kernels.size(); ++l) row[l].add(h_from_raw(kernels[l], raw));
    }
    const double inv_i = 1.0 / static_cast<double>(i + 1);
    for (std::size_t l = 0; l < kernels.size(); ++l) {
      w[l] = row[l].value() * inv_i;
      t_acc[l].add(w[l]);
    }
    for (std::size_t a = 0; a < kernels.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) s_acc[a * kernels.size() + b].add(w[a] * w[b]);
    }
  }

  MultiKernelResult out;
  out.r = r;
  out.t_vec.resize(r);
  out.sigma_mat.resize(r, r);
  const double nn = static_cast<double>(n);
  for (int a = 0; a < r; ++a) {
    out.t_vec(a) = t_acc[static_cast<std::size_t>(a)].value() / nn;
    for (int b = 0; b <= a; ++b) {
      const double v =
          s_acc[static_cast<std::size_t>(a) * kernels.size() + static_cast<std::size_t>(b)]
              .value() /
          (nn * nn);
      out.sigma_mat(a, b) = v;
      out.sigma_mat(b, a) = v;
    }
  }

  const double trace = out.sigma_mat.trace();
  if (!(trace > 0.0)) {
    out.degenerate = true;
    return out;
  }
  // Duplicate kernels make Sigma exactly rank deficient; jitter would mask
  // that, so rank is checked explicitly first.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.sigma_mat,
                                                     Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success ||
      eig.eigenvalues().minCoeff() <= 1e-12 * trace) {
    out.degenerate = true;
    return out;
  }

  const double jitter = 1e-12 * trace / r;
  Eigen::MatrixXd sigma = out.sigma_mat;
  sigma.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    out.degenerate = true;
    return out;
  }
  out.mahalanobis = std::max(out.t_vec.dot(llt.solve(out.t_vec)), 0.0);
  return out;
}

TestOutcome mmmmd_test(const PairedDataset& data, const std::vector<KernelSpec>& specs,
                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("mmmmd_test: alpha outside (0,1)");
  const auto start = std::chrono::steady_clock::now();
  const std::vector<ResolvedKernel> kernels = resolve_bandwidths(specs, data.x(), data.y());
  const MultiKernelResult res = compute_mmmmd(data, kernels);
  const auto stop = std::chrono::steady_clock::now();

  TestOutcome out;
  out.method = TestMethod::MultiKernel;
  out.alpha = alpha;
  out.threshold = chi2_quantile(res.r, 1.0 - alpha);
  out.degenerate = res.degenerate;
  if (res.degenerate) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.reject = false;
  } else {
    out.statistic = res.mahalanobis;
    out.p_value = 1.0 - chi2_cdf(res.r, res.mahalanobis);
    out.reject = out.statistic > out.threshold;
  }
  out.diagnostics["r"] = static_cast<double>(res.r);
  out.diagnostics["n"] = static_cast<double>(data.n());
  out.diagnostics["d"] = static_cast<double>(data.dim());
  for (std::size_t l = 0; l < kernels.size(); ++l) {
    out.diagnostics["bandwidth_" + std::to_string(l)] = kernels[l].scale();
  }
  out.diagnostics["runtime_ns"] = static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  return out;
}

}  // namespace mmd
