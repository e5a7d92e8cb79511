#include "mmd/harness.hpp"

#include "mmd/distfn.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mmd {

namespace {

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, count); results must go into caller-owned slots so
// the final reduction order is independent of scheduling.
void parallel_for(int threads, std::int64_t count, const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      const std::int64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int t = static_cast<int>(std::min<std::int64_t>(threads, count));
  pool.reserve(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string MethodSpec::label() const {
  switch (kind) {
    case TestMethod::GammaFamily: {
      std::ostringstream os;
      os << "gamma" << gamma;
      return os.str();
    }
    case TestMethod::MultiKernel:
      return "mmmmd";
    default:
      return to_string(kind);
  }
}

MethodSpec MethodSpec::parse(const std::string& name) {
  MethodSpec m;
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  if (head == "mmmd") {
    m.kind = TestMethod::Mmmd;
  } else if (head == "gamma") {
    m.kind = TestMethod::GammaFamily;
    if (colon != std::string::npos) m.gamma = std::stod(name.substr(colon + 1));
  } else if (head == "mmmmd") {
    m.kind = TestMethod::MultiKernel;
  } else if (head == "mmd-perm") {
    m.kind = TestMethod::PermMmd;
    if (colon != std::string::npos) m.num_perms = std::stoi(name.substr(colon + 1));
  } else if (head == "block") {
    m.kind = TestMethod::BlockMmd;
    if (colon != std::string::npos) m.block_size = std::stol(name.substr(colon + 1));
  } else if (head == "linear") {
    m.kind = TestMethod::LinearMmd;
  } else if (head == "cross") {
    m.kind = TestMethod::CrossMmd;
  } else {
    throw std::invalid_argument("unknown method: " + name);
  }
  return m;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw std::invalid_argument("ExperimentConfig: empty n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    throw std::invalid_argument("ExperimentConfig: n grid must be ascending");
  }
  for (Index n : n_grid) {
    if (n < 2) throw std::invalid_argument("ExperimentConfig: n must be >= 2");
  }
  if (methods.empty()) throw std::invalid_argument("ExperimentConfig: no methods");
  if (reps < 1) throw std::invalid_argument("ExperimentConfig: reps must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ExperimentConfig: bad alpha");
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t cell_index, int reps, int rep) {
  return split_seed(seed, static_cast<std::uint64_t>(cell_index) *
                              static_cast<std::uint64_t>(reps) +
                              static_cast<std::uint64_t>(rep));
}

TestOutcome run_method(const MethodSpec& method, const KernelSpec& kernel,
                       const PairedDataset& data, double alpha, std::uint64_t seed) {
  switch (method.kind) {
    case TestMethod::Mmmd:
      return mmd_test(data, kernel, alpha);
    case TestMethod::GammaFamily:
      return gamma_test(data, kernel, method.gamma, alpha);
    case TestMethod::MultiKernel: {
      std::vector<KernelSpec> specs;
      specs.reserve(method.multi_factors.size());
      for (std::size_t i = 0; i < method.multi_factors.size(); ++i) {
        KernelSpec s;
        s.family = method.multi_families.empty() ? kernel.family : method.multi_families[i];
        if (kernel.bandwidth.kind == BandwidthRule::Kind::Fixed) {
          s.bandwidth = BandwidthRule::fixed(kernel.bandwidth.lambda * method.multi_factors[i]);
        } else {
          s.bandwidth = BandwidthRule::median(method.multi_factors[i]);
        }
        specs.push_back(s);
      }
      return mmmmd_test(data, specs, alpha);
    }
    case TestMethod::PermMmd: {
      PermutationPlan plan;
      plan.num_perms = method.num_perms;
      plan.seed = split_seed(seed, 0x7065726dULL);  // distinct stream from generation
      return permutation_mmd_test(data, kernel, plan, alpha);
    }
    case TestMethod::BlockMmd: {
      const Index b = method.block_size > 0
                          ? method.block_size
                          : static_cast<Index>(std::floor(std::sqrt(static_cast<double>(data.n()))));
      return block_mmd_test(data, kernel, std::max<Index>(b, 2), alpha);
    }
    case TestMethod::LinearMmd:
      return linear_mmd_test(data, kernel, alpha);
    case TestMethod::CrossMmd:
      return cross_mmd_test(data, kernel, alpha);
  }
  throw std::logic_error("run_method: unreachable");
}

namespace {

struct RepResult {
  double statistic = 0.0;
  bool reject = false;
};

// Shared cell loop: per-replication child seeds, slot storage, fixed-order
// reduction, so results are identical for any thread count.
ExperimentReport run_cells(const ExperimentConfig& config, bool record_samples,
                           bool null_reference) {
  config.validate();
  ExperimentReport report;
  const int threads = effective_threads(config.threads);

  std::size_t cell_index = 0;
  for (const MethodSpec& method : config.methods) {
    for (Index n : config.n_grid) {
      GeneratorSpec gen = config.generator;
      gen.n = n;

      std::vector<RepResult> slots(static_cast<std::size_t>(config.reps));
      parallel_for(threads, config.reps, [&](std::int64_t r) {
        GeneratorSpec g = gen;
        g.seed = replication_seed(config.seed, cell_index, config.reps, static_cast<int>(r));
        const PairedDataset data = generate(g);
        const TestOutcome out = run_method(method, config.kernel, data, config.alpha, g.seed);
        slots[static_cast<std::size_t>(r)] = {out.statistic, out.reject};
      });

      CellRecord cell;
      cell.method = method.label();
      cell.n = n;
      cell.d = config.generator.d;
      KahanSum stat_sum;
      int rejects = 0;
      std::vector<double> sample;
      sample.reserve(slots.size());
      for (const RepResult& r : slots) {
        stat_sum.add(r.statistic);
        rejects += r.reject ? 1 : 0;
        sample.push_back(r.statistic);
      }
      cell.rejection_rate = static_cast<double>(rejects) / config.reps;
      cell.mean_statistic = stat_sum.value() / config.reps;

      if (null_reference) {
        EmpiricalSample es(sample);
        if (method.kind == TestMethod::MultiKernel) {
          const int r = static_cast<int>(method.multi_factors.size());
          cell.ks_distance = ks_distance(es, [r](double x) { return chi2_cdf(r, x); });
        } else {
          cell.ks_distance = ks_distance(es, [](double x) { return std_normal_cdf(x); });
        }
      }
      if (record_samples) report.samples.push_back(std::move(sample));
      report.cells.push_back(std::move(cell));
      ++cell_index;
    }
  }
  return report;
}

}  // namespace

ExperimentReport simulate_null(const ExperimentConfig& config) {
  if (!config.generator.is_structurally_null()) {
    throw std::invalid_argument("simulate_null: generator must have P = Q");
  }
  return run_cells(config, /*record_samples=*/true, /*null_reference=*/true);
}

ExperimentReport power_curve(const ExperimentConfig& config) {
  return run_cells(config, /*record_samples=*/false, /*null_reference=*/false);
}

ExperimentReport runtime_bench(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  std::size_t cell_index = 0;
  for (const MethodSpec& method : config.methods) {
    for (Index n : config.n_grid) {
      GeneratorSpec gen = config.generator;
      gen.n = n;

      std::vector<double> times(static_cast<std::size_t>(config.reps));
      std::vector<RepResult> slots(static_cast<std::size_t>(config.reps));
      for (int r = 0; r < config.reps; ++r) {  // timing stays single-threaded
        GeneratorSpec g = gen;
        g.seed = replication_seed(config.seed, cell_index, config.reps, r);
        const PairedDataset data = generate(g);
        const auto start = std::chrono::steady_clock::now();
        const TestOutcome out = run_method(method, config.kernel, data, config.alpha, g.seed);
        const auto stop = std::chrono::steady_clock::now();
        times[static_cast<std::size_t>(r)] = static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
        slots[static_cast<std::size_t>(r)] = {out.statistic, out.reject};
      }

      CellRecord cell;
      cell.method = method.label();
      cell.n = n;
      cell.d = config.generator.d;
      KahanSum stat_sum;
      int rejects = 0;
      for (const RepResult& r : slots) {
        stat_sum.add(r.statistic);
        rejects += r.reject ? 1 : 0;
      }
      cell.rejection_rate = static_cast<double>(rejects) / config.reps;
      cell.mean_statistic = stat_sum.value() / config.reps;
      std::sort(times.begin(), times.end());
      cell.mean_runtime_ns = times[times.size() / 2];  // median
      report.cells.push_back(std::move(cell));
      ++cell_index;
    }
  }
  return report;
}

AltVarianceResult alt_variance_check(const GeneratorSpec& generator, const KernelSpec& kernel,
                                     Index n, int reps, Index aux_m, std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("alt_variance_check: need reps >= 2");
  if (aux_m < 2) throw std::invalid_argument("alt_variance_check: need aux_m >= 2");

  GeneratorSpec aux_gen = generator;
  aux_gen.n = aux_m;
  aux_gen.seed = split_seed(seed, 0xA0C);
  const PairedDataset aux = generate(aux_gen);
  const ResolvedKernel k = resolve_bandwidth(kernel, aux.x(), aux.y());
  const HMoments moments = estimate_h_moments(aux, k);
  if (!(moments.var_h_hat > 0.0)) {
    throw std::runtime_error("alt_variance_check: degenerate var_h_hat = 0");
  }

  std::vector<double> centered(static_cast<std::size_t>(reps));
  const int threads = effective_threads(0);
  parallel_for(threads, reps, [&](std::int64_t r) {
    GeneratorSpec g = generator;
    g.n = n;
    g.seed = split_seed(seed, static_cast<std::uint64_t>(r) + 1);
    const PairedDataset data = generate(g);
    const MmdBreakdown b = compute_mmd_breakdown(data, k);
    centered[static_cast<std::size_t>(r)] =
        std::sqrt(static_cast<double>(n)) * (b.t_n - moments.mmd_sq_hat);
  });

  KahanSum mean_acc;
  for (double v : centered) mean_acc.add(v);
  const double mean = mean_acc.value() / reps;
  KahanSum var_acc;
  for (double v : centered) var_acc.add((v - mean) * (v - mean));
  const double var = var_acc.value() / (reps - 1);

  AltVarianceResult out;
  out.mmd_sq_hat = moments.mmd_sq_hat;
  out.var_h_hat = moments.var_h_hat;
  out.ratio = var / (5.0 * moments.var_h_hat);
  out.unreliable = reps < 30;
  return out;
}

double sn_limit_check(Index n) {
  if (n < 2) throw std::invalid_argument("sn_limit_check: need n >= 2");
  // tail[i] = sum_{j=i+1}^{n} 1/j, built backwards in O(n).
  KahanSum a_sum, b_sum, c_sum;
  double tail = 0.0;
  std::vector<double> tails(static_cast<std::size_t>(n) + 1, 0.0);
  for (Index i = n; i >= 1; --i) {
    tails[static_cast<std::size_t>(i)] = tail;
    tail += 1.0 / static_cast<double>(i);
  }
  for (Index i = 1; i <= n; ++i) {
    const double frac = static_cast<double>(i - 1) / static_cast<double>(i);
    const double t = tails[static_cast<std::size_t>(i)];
    a_sum.add(frac * frac);
    b_sum.add(frac * t);
    c_sum.add(t * t);
  }
  return (a_sum.value() + 2.0 * b_sum.value() + c_sum.value()) / static_cast<double>(n);
}

}  // namespace mmd
