#include "mmd/statcore.hpp"

#include "mmd/distfn.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mmd {

std::vector<double> collect_row_sums(const PairedDataset& data, const ResolvedKernel& k) {
  const Index n = data.n();
  std::vector<double> row_sums(static_cast<std::size_t>(n - 1));
  for (Index i = 1; i < n; ++i) {
    KahanSum row;
    for (Index j = 0; j < i; ++j) row.add(eval_H(k, data, i, j));
    row_sums[static_cast<std::size_t>(i - 1)] = row.value();
  }
  return row_sums;
}

namespace {

MmdBreakdown breakdown_from_row_sums(std::vector<double> row_sums, Index n) {
  KahanSum t_acc;
  KahanSum sq_acc;
  for (std::size_t k = 0; k < row_sums.size(); ++k) {
    const double w = row_sums[k] / static_cast<double>(k + 2);  // 1-based pair index
    t_acc.add(w);
    sq_acc.add(w * w);
  }
  MmdBreakdown out;
  out.row_sums = std::move(row_sums);
  const double nn = static_cast<double>(n);
  out.t_n = t_acc.value() / nn;
  out.sigma_n = std::sqrt(std::max(sq_acc.value(), 0.0)) / nn;
  out.degenerate = !(out.sigma_n > 0.0);
  out.eta_n = out.degenerate ? 0.0 : out.t_n / out.sigma_n;
  return out;
}

}  // namespace

MmdBreakdown compute_mmd_breakdown(const PairedDataset& data, const ResolvedKernel& k) {
  return breakdown_from_row_sums(collect_row_sums(data, k), data.n());
}

GammaStatistic gamma_statistic_from_row_sums(const std::vector<double>& row_sums, Index n,
                                             double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("gamma_statistic: gamma outside [0,1]");
  }
  KahanSum num;
  KahanSum sq;
  for (std::size_t k = 0; k < row_sums.size(); ++k) {
    const double w = row_sums[k] * std::pow(static_cast<double>(k + 2), -gamma);
    num.add(w);
    sq.add(w * w);
  }
  GammaStatistic out;
  out.gamma = gamma;
  out.numerator = num.value();
  out.denominator = std::sqrt(std::max(sq.value(), 0.0));
  out.degenerate = !(out.denominator > 0.0);
  out.standardized = out.degenerate ? 0.0 : out.numerator / out.denominator;
  out.t_n_gamma = out.numerator / std::pow(static_cast<double>(n), 2.0 - gamma);
  return out;
}

GammaStatistic compute_gamma_statistic(const PairedDataset& data, const ResolvedKernel& k,
                                       double gamma) {
  return gamma_statistic_from_row_sums(collect_row_sums(data, k), data.n(), gamma);
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("test: alpha outside (0,1)");
  }
}

TestOutcome z_calibrated_outcome(TestMethod method, double statistic, bool degenerate,
                                 double alpha) {
  TestOutcome out;
  out.method = method;
  out.alpha = alpha;
  out.threshold = std_normal_quantile(1.0 - alpha);
  out.degenerate = degenerate;
  if (degenerate) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.reject = false;
  } else {
    out.statistic = statistic;
    out.p_value = 1.0 - std_normal_cdf(statistic);
    out.reject = statistic > out.threshold;
  }
  return out;
}

}  // namespace

TestOutcome mmd_test(const PairedDataset& data, const KernelSpec& spec, double alpha) {
  check_alpha(alpha);
  const auto start = std::chrono::steady_clock::now();
  const ResolvedKernel k = resolve_bandwidth(spec, data.x(), data.y());
  const MmdBreakdown b = compute_mmd_breakdown(data, k);
  const auto stop = std::chrono::steady_clock::now();

  TestOutcome out = z_calibrated_outcome(TestMethod::Mmmd, b.eta_n, b.degenerate, alpha);
  out.diagnostics["bandwidth"] = k.scale();
  out.diagnostics["n"] = static_cast<double>(data.n());
  out.diagnostics["d"] = static_cast<double>(data.dim());
  out.diagnostics["runtime_ns"] = static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  return out;
}

TestOutcome gamma_test(const PairedDataset& data, const KernelSpec& spec, double gamma,
                       double alpha) {
  check_alpha(alpha);
  const auto start = std::chrono::steady_clock::now();
  const ResolvedKernel k = resolve_bandwidth(spec, data.x(), data.y());
  const GammaStatistic g = compute_gamma_statistic(data, k, gamma);
  const auto stop = std::chrono::steady_clock::now();

  TestOutcome out =
      z_calibrated_outcome(TestMethod::GammaFamily, g.standardized, g.degenerate, alpha);
  out.diagnostics["bandwidth"] = k.scale();
  out.diagnostics["gamma"] = gamma;
  out.diagnostics["n"] = static_cast<double>(data.n());
  out.diagnostics["d"] = static_cast<double>(data.dim());
  out.diagnostics["runtime_ns"] = static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
  return out;
}

HMoments estimate_h_moments(const PairedDataset& aux, const ResolvedKernel& k) {
  const Index m = aux.n();
  if (m < 2) throw std::invalid_argument("estimate_h_moments: need at least 2 aux pairs");

  // Row sums over all b != a, one eval_H per unordered pair.
  std::vector<KahanSum> rows(static_cast<std::size_t>(m));
  for (Index a = 1; a < m; ++a) {
    for (Index b = 0; b < a; ++b) {
      const double h = eval_H(k, aux, a, b);
      rows[static_cast<std::size_t>(a)].add(h);
      rows[static_cast<std::size_t>(b)].add(h);
    }
  }

  KahanSum total;
  for (const auto& r : rows) total.add(r.value());
  const double mm = static_cast<double>(m);
  HMoments out;
  out.mmd_sq_hat = total.value() / (mm * (mm - 1.0));

  KahanSum mean_acc;
  std::vector<double> h_hat(static_cast<std::size_t>(m));
  for (Index a = 0; a < m; ++a) {
    h_hat[static_cast<std::size_t>(a)] =
        rows[static_cast<std::size_t>(a)].value() / (mm - 1.0) - out.mmd_sq_hat;
    mean_acc.add(h_hat[static_cast<std::size_t>(a)]);
  }
  const double mean = mean_acc.value() / mm;
  KahanSum var_acc;
  for (double v : h_hat) var_acc.add((v - mean) * (v - mean));
  out.var_h_hat = std::max(var_acc.value(), 0.0) / (mm - 1.0);
  return out;
}

}  // namespace mmd
