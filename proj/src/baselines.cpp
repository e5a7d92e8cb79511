#include "mmd/baselines.hpp"

#include "mmd/distfn.hpp"
#include "mmd/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmd {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("test: alpha outside (0,1)");
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

MeanStd mean_std(const std::vector<double>& v) {
  KahanSum sum;
  for (double x : v) sum.add(x);
  MeanStd out;
  out.mean = sum.value() / static_cast<double>(v.size());
  KahanSum sq;
  for (double x : v) sq.add((x - out.mean) * (x - out.mean));
  out.std = std::sqrt(std::max(sq.value(), 0.0) / static_cast<double>(v.size() - 1));
  return out;
}

// Studentized mean against z_{1-alpha}; zero spread is a degenerate outcome,
// never a rejection.
TestOutcome studentized_outcome(TestMethod method, const std::vector<double>& values,
                                double alpha) {
  const MeanStd ms = mean_std(values);
  TestOutcome out;
  out.method = method;
  out.alpha = alpha;
  out.threshold = std_normal_quantile(1.0 - alpha);
  if (!(ms.std > 0.0)) {
    out.degenerate = true;
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.reject = false;
    return out;
  }
  out.statistic = ms.mean / (ms.std / std::sqrt(static_cast<double>(values.size())));
  out.p_value = 1.0 - std_normal_cdf(out.statistic);
  out.reject = out.statistic > out.threshold;
  return out;
}

void stamp_diagnostics(TestOutcome& out, const PairedDataset& data, const ResolvedKernel& k,
                       std::chrono::steady_clock::time_point start) {
  out.diagnostics["bandwidth"] = k.scale();
  out.diagnostics["n"] = static_cast<double>(data.n());
  out.diagnostics["d"] = static_cast<double>(data.dim());
  out.diagnostics["runtime_ns"] =
      static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count());
}

}  // namespace

double unbiased_mmd_sq(const PairedDataset& data, const ResolvedKernel& k, Index begin,
                       Index end) {
  const Index m = end - begin;
  if (m < 2) throw std::invalid_argument("unbiased_mmd_sq: need at least 2 pairs");
  KahanSum sum;
  for (Index i = begin + 1; i < end; ++i) {
    for (Index j = begin; j < i; ++j) sum.add(eval_H(k, data, i, j));
  }
  const double mm = static_cast<double>(m);
  return 2.0 * sum.value() / (mm * (mm - 1.0));
}

double quad_mmd_statistic(const PairedDataset& data, const ResolvedKernel& k) {
  const Index n = data.n();
  KahanSum sum;
  for (Index i = 1; i < n; ++i) {
    for (Index j = 0; j < i; ++j) sum.add(eval_H(k, data, i, j));
  }
  const double nn = static_cast<double>(n);
  return 2.0 * sum.value() / (nn * nn);
}

TestOutcome permutation_mmd_test(const PairedDataset& data, const KernelSpec& spec,
                                 const PermutationPlan& plan, double alpha) {
  check_alpha(alpha);
  if (plan.num_perms < 1) throw std::invalid_argument("permutation_mmd_test: num_perms >= 1");
  const auto start = std::chrono::steady_clock::now();
  const ResolvedKernel k = resolve_bandwidth(spec, data.x(), data.y());
  const double observed = quad_mmd_statistic(data, k);

  const Index n = data.n();
  const Index m = 2 * n;
  const Index d = data.dim();

  // Pooled kernel matrix; relabelings only regroup its entries.
  SampleMatrix pooled(m, d);
  pooled.topRows(n) = data.x();
  pooled.bottomRows(n) = data.y();
  Eigen::MatrixXd gram(m, m);
  for (Index i = 0; i < m; ++i) {
    const double* pi = pooled.data() + i * d;
    for (Index j = 0; j <= i; ++j) {
      const double v = k.eval(pi, pooled.data() + j * d, d);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }

  std::vector<Index> labels(static_cast<std::size_t>(m));
  std::iota(labels.begin(), labels.end(), Index{0});
  const double nn = static_cast<double>(n);

  std::vector<double> perm_stats(static_cast<std::size_t>(plan.num_perms));
  for (int p = 0; p < plan.num_perms; ++p) {
    SplitMix64 rng(split_seed(plan.seed, static_cast<std::uint64_t>(p)));
    std::iota(labels.begin(), labels.end(), Index{0});
    shuffle(labels, rng);
    const Index* a = labels.data();      // new X indices
    const Index* b = labels.data() + n;  // new Y indices
    KahanSum sum;
    for (Index i = 1; i < n; ++i) {
      for (Index j = 0; j < i; ++j) {
        sum.add(gram(a[i], a[j]) - gram(a[i], b[j]) - gram(a[j], b[i]) + gram(b[i], b[j]));
      }
    }
    perm_stats[static_cast<std::size_t>(p)] = 2.0 * sum.value() / (nn * nn);
  }

  int exceed = 0;
  for (double s : perm_stats) {
    if (s >= observed) ++exceed;
  }
  const double p_value = (1.0 + exceed) / (plan.num_perms + 1.0);

  TestOutcome out;
  out.method = TestMethod::PermMmd;
  out.alpha = alpha;
  out.statistic = observed;
  out.p_value = p_value;
  out.reject = p_value <= alpha;
  // Implied critical value: the k-th largest permuted statistic.
  const int kth = static_cast<int>(std::floor(alpha * (plan.num_perms + 1)));
  if (kth >= 1 && kth <= plan.num_perms) {
    std::vector<double> sorted = perm_stats;
    std::nth_element(sorted.begin(), sorted.begin() + (kth - 1), sorted.end(),
                     std::greater<double>());
    out.threshold = sorted[static_cast<std::size_t>(kth - 1)];
  } else {
    out.threshold = std::numeric_limits<double>::infinity();
  }
  out.diagnostics["num_perms"] = static_cast<double>(plan.num_perms);
  stamp_diagnostics(out, data, k, start);
  return out;
}

TestOutcome block_mmd_test(const PairedDataset& data, const KernelSpec& spec,
                           Index block_size, double alpha) {
  check_alpha(alpha);
  if (block_size < 2) throw std::invalid_argument("block_mmd_test: block_size must be >= 2");
  const Index num_blocks = data.n() / block_size;
  if (num_blocks < 2) throw std::invalid_argument("block_mmd_test: need at least 2 complete blocks");

  const auto start = std::chrono::steady_clock::now();
  const ResolvedKernel k = resolve_bandwidth(spec, data.x(), data.y());
  std::vector<double> block_stats(static_cast<std::size_t>(num_blocks));
  for (Index b = 0; b < num_blocks; ++b) {
    block_stats[static_cast<std::size_t>(b)] =
        unbiased_mmd_sq(data, k, b * block_size, (b + 1) * block_size);
  }
  TestOutcome out = studentized_outcome(TestMethod::BlockMmd, block_stats, alpha);
  out.diagnostics["block_size"] = static_cast<double>(block_size);
  out.diagnostics["num_blocks"] = static_cast<double>(num_blocks);
  stamp_diagnostics(out, data, k, start);
  return out;
}

TestOutcome linear_mmd_test(const PairedDataset& data, const KernelSpec& spec, double alpha) {
  check_alpha(alpha);
  if (data.n() < 4) throw std::invalid_argument("linear_mmd_test: need n >= 4");
  const auto start = std::chrono::steady_clock::now();
  const ResolvedKernel k = resolve_bandwidth(spec, data.x(), data.y());
  const Index m = data.n() / 2;
  std::vector<double> vals(static_cast<std::size_t>(m));
  for (Index t = 0; t < m; ++t) {
    vals[static_cast<std::size_t>(t)] = eval_H(k, data, 2 * t, 2 * t + 1);
  }
  TestOutcome out = studentized_outcome(TestMethod::LinearMmd, vals, alpha);
  stamp_diagnostics(out, data, k, start);
  return out;
}

TestOutcome cross_mmd_test(const PairedDataset& data, const KernelSpec& spec, double alpha) {
  check_alpha(alpha);
  if (data.n() < 4) throw std::invalid_argument("cross_mmd_test: need n >= 4");
  const auto start = std::chrono::steady_clock::now();
  const ResolvedKernel k = resolve_bandwidth(spec, data.x(), data.y());
  const Index n = data.n();
  const Index n_a = (n + 1) / 2;  // first half (rounded up), rest is B
  std::vector<double> u(static_cast<std::size_t>(n_a));
  for (Index i = 0; i < n_a; ++i) {
    KahanSum sum;
    for (Index j = n_a; j < n; ++j) sum.add(eval_H(k, data, i, j));
    u[static_cast<std::size_t>(i)] = sum.value() / static_cast<double>(n - n_a);
  }
  TestOutcome out = studentized_outcome(TestMethod::CrossMmd, u, alpha);
  stamp_diagnostics(out, data, k, start);
  return out;
}

}  // namespace mmd
