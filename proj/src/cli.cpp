#include "mmd/cli.hpp"

#include "mmd/harness.hpp"
#include "mmd/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace mmd {

namespace {

// Bandwidth flags: "median", "median:<factor>", "<lambda>", "minimax:<beta>".
// The minimax rule needs (n, d), so materialization waits for the data.
struct BandwidthFlag {
  enum class Kind { Median, Fixed, Minimax };
  Kind kind = Kind::Median;
  double value = 1.0;  // factor / lambda / beta

  static BandwidthFlag parse(const std::string& s) {
    BandwidthFlag f;
    if (s == "median") return f;
    if (s.rfind("median:", 0) == 0) {
      f.value = std::stod(s.substr(7));
      return f;
    }
    if (s.rfind("minimax:", 0) == 0) {
      f.kind = Kind::Minimax;
      f.value = std::stod(s.substr(8));
      return f;
    }
    f.kind = Kind::Fixed;
    f.value = std::stod(s);
    return f;
  }

  BandwidthRule materialize(Index n, int d) const {
    switch (kind) {
      case Kind::Median: return BandwidthRule::median(value);
      case Kind::Fixed: return BandwidthRule::fixed(value);
      case Kind::Minimax: return BandwidthRule::minimax_gaussian(value, n, d);
    }
    throw std::logic_error("unreachable");
  }
};

KernelFamily parse_family(const std::string& s) {
  if (s == "gaussian") return KernelFamily::Gaussian;
  if (s == "laplace") return KernelFamily::Laplace;
  if (s == "linear") return KernelFamily::Linear;
  throw std::invalid_argument("unknown kernel family: " + s);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      if (i > start) out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<Index> parse_n_grid(const std::string& s) {
  std::vector<Index> out;
  for (const auto& tok : split_list(s)) out.push_back(static_cast<Index>(std::stol(tok)));
  return out;
}

int thread_count(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MMD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // harness default (hardware concurrency)
}

struct TestArgs {
  std::string method = "mmmd";
  std::string kernel = "gaussian";
  std::string bandwidth = "median";
  std::string kernels;  // mmmmd: "gaussian:1,gaussian:2,gaussian:4"
  std::string bandwidth_base = "median";
  double alpha = 0.05;
  double gamma = 1.0;
  int perms = 200;
  long block_size = 0;
  std::string x_path;
  std::string y_path;
  std::uint64_t seed = 0;
  bool shuffle = false;
};

int run_test(const TestArgs& args) {
  SampleMatrix x = read_csv_matrix(args.x_path);
  SampleMatrix y = read_csv_matrix(args.y_path);
  if (x.cols() != y.cols()) {
    throw std::runtime_error("--x and --y have different dimensions");
  }

  const MethodSpec method = MethodSpec::parse(args.method);
  const bool paired_method = method.kind == TestMethod::Mmmd ||
                             method.kind == TestMethod::GammaFamily ||
                             method.kind == TestMethod::MultiKernel;
  if (x.rows() != y.rows()) {
    if (paired_method) {
      throw std::runtime_error("method requires equal sample sizes (got " +
                               std::to_string(x.rows()) + " and " + std::to_string(y.rows()) +
                               ")");
    }
    const Index n = std::min(x.rows(), y.rows());  // baselines truncate
    x.conservativeResize(n, x.cols());
    y.conservativeResize(n, y.cols());
  }

  PairedDataset data(std::move(x), std::move(y));
  if (args.shuffle) data = shuffled_pairs(data, split_seed(args.seed, 0x5f17));

  const Index n = data.n();
  const Index d = data.dim();

  TestOutcome outcome;
  if (method.kind == TestMethod::MultiKernel) {
    const BandwidthFlag base = BandwidthFlag::parse(args.bandwidth_base);
    std::vector<KernelSpec> specs;
    const std::string list = args.kernels.empty() ? "gaussian:1,gaussian:2,gaussian:4" : args.kernels;
    for (const auto& tok : split_list(list)) {
      const auto colon = tok.find(':');
      KernelSpec s;
      s.family = parse_family(tok.substr(0, colon));
      const double factor = colon == std::string::npos ? 1.0 : std::stod(tok.substr(colon + 1));
      if (base.kind == BandwidthFlag::Kind::Median) {
        s.bandwidth = BandwidthRule::median(base.value * factor);
      } else if (base.kind == BandwidthFlag::Kind::Fixed) {
        s.bandwidth = BandwidthRule::fixed(base.value * factor);
      } else {
        throw std::runtime_error("--bandwidth-base minimax is not supported for --kernels");
      }
      specs.push_back(s);
    }
    outcome = mmmmd_test(data, specs, args.alpha);
  } else {
    KernelSpec spec;
    spec.family = parse_family(args.kernel);
    spec.bandwidth = BandwidthFlag::parse(args.bandwidth).materialize(n, static_cast<int>(d));
    switch (method.kind) {
      case TestMethod::Mmmd:
        outcome = mmd_test(data, spec, args.alpha);
        break;
      case TestMethod::GammaFamily:
        outcome = gamma_test(data, spec, args.gamma, args.alpha);
        break;
      case TestMethod::PermMmd: {
        PermutationPlan plan;
        plan.num_perms = args.perms;
        plan.seed = args.seed;
        outcome = permutation_mmd_test(data, spec, plan, args.alpha);
        break;
      }
      case TestMethod::BlockMmd: {
        const Index b = args.block_size > 0
                            ? static_cast<Index>(args.block_size)
                            : static_cast<Index>(std::floor(std::sqrt(static_cast<double>(n))));
        outcome = block_mmd_test(data, spec, std::max<Index>(b, 2), args.alpha);
        break;
      }
      case TestMethod::LinearMmd:
        outcome = linear_mmd_test(data, spec, args.alpha);
        break;
      case TestMethod::CrossMmd:
        outcome = cross_mmd_test(data, spec, args.alpha);
        break;
      default:
        throw std::runtime_error("unhandled method");
    }
  }

  std::cout << outcome_json(outcome, n, d, args.seed);
  return outcome.degenerate ? 3 : 0;
}

struct ExperimentArgs {
  long n = 200;
  std::string n_grid;
  int d = 10;
  std::string dist = "gaussian";
  int df = 10;
  int j = 5;
  double eps = 0.3;
  double rho = 0.5;
  double scale = 1.0;
  std::string kernel = "gaussian";
  std::string bandwidth = "median";
  std::string methods = "mmmd";
  int reps = 100;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string out;
  std::string config_path;
  int threads = 0;
};

GeneratorSpec make_generator(const ExperimentArgs& args, bool null_only) {
  if (args.dist == "gaussian" || args.dist == "std-gaussian") {
    return GeneratorSpec::std_gaussian(args.d, 2, 0);
  }
  if (args.dist == "t" || args.dist == "multivariate-t") {
    return GeneratorSpec::multivariate_t(args.d, args.df, 2, 0);
  }
  if (null_only) throw std::runtime_error("simulate-null requires --dist gaussian or t");
  if (args.dist == "mean-shift" || args.dist == "gaussian-mean-shift") {
    return GeneratorSpec::gaussian_mean_shift(args.d, args.j, args.eps, 2, 0);
  }
  if (args.dist == "ar-cov-scale") {
    return GeneratorSpec::ar_cov_scale(args.d, args.rho, args.scale, 2, 0);
  }
  throw std::runtime_error("unknown distribution: " + args.dist);
}

ExperimentConfig make_config(const ExperimentArgs& args, bool null_only, bool grid_default_single) {
  ExperimentConfig config;
  config.generator = make_generator(args, null_only);
  config.n_grid = args.n_grid.empty() ? std::vector<Index>{static_cast<Index>(args.n)}
                                      : parse_n_grid(args.n_grid);
  if (grid_default_single && config.n_grid.size() != 1) {
    throw std::runtime_error("this subcommand takes a single --n");
  }
  for (const auto& name : split_list(args.methods)) {
    config.methods.push_back(MethodSpec::parse(name));
  }
  config.kernel.family = parse_family(args.kernel);
  const BandwidthFlag bf = BandwidthFlag::parse(args.bandwidth);
  // Minimax needs n: materialize per the largest grid entry for reporting;
  // resolution happens per dataset anyway for median rules.
  config.kernel.bandwidth = bf.materialize(config.n_grid.back(), args.d);
  config.reps = args.reps;
  config.alpha = args.alpha;
  config.seed = args.seed;
  config.output_path = args.out;
  config.threads = thread_count(args.threads);
  return config;
}

ExperimentConfig config_from_json(const std::string& path, int threads) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;

  ExperimentArgs args;
  const auto& gen = j.at("generator");
  args.dist = gen.at("kind").get<std::string>();
  args.d = gen.value("d", 10);
  args.j = gen.value("j", 5);
  args.eps = gen.value("eps", 0.3);
  args.df = gen.value("df", 10);
  args.rho = gen.value("rho", 0.5);
  args.scale = gen.value("scale", 1.0);
  if (j.contains("kernel")) {
    args.kernel = j["kernel"].value("family", "gaussian");
    args.bandwidth = j["kernel"].value("bandwidth", "median");
  }
  args.reps = j.value("reps", 100);
  args.alpha = j.value("alpha", 0.05);
  args.seed = j.value("seed", 0ULL);
  args.threads = threads;

  std::string methods;
  for (const auto& m : j.at("methods")) {
    if (!methods.empty()) methods += ',';
    methods += m.get<std::string>();
  }
  args.methods = methods;

  std::string grid;
  for (const auto& n : j.at("n_grid")) {
    if (!grid.empty()) grid += ',';
    grid += std::to_string(n.get<long>());
  }
  args.n_grid = grid;
  args.out = j.value("out", "");
  return make_config(args, /*null_only=*/false, /*grid_default_single=*/false);
}

void write_outputs(const ExperimentConfig& config, const ExperimentReport& report,
                   const std::string& experiment, bool samples) {
  if (config.output_path.empty()) return;
  write_report_csv(config.output_path + "_report.csv", report);
  if (samples) write_samples_csv(config.output_path + "_samples.csv", report);
  write_text_file(config.output_path + "_summary.json",
                  report_summary_json(config, report, experiment));
}

void print_cells(const ExperimentReport& report) {
  for (const CellRecord& c : report.cells) {
    std::cout << c.method << " n=" << c.n << " d=" << c.d
              << " rejection_rate=" << format_double(c.rejection_rate);
    if (c.ks_distance) std::cout << " ks=" << format_double(*c.ks_distance);
    if (c.mean_runtime_ns) std::cout << " median_runtime_ns=" << format_double(*c.mean_runtime_ns);
    std::cout << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"martingale MMD two-sample tests"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (env MMD_THREADS)");

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "run a two-sample test on CSV data");
  test->add_option("--method", test_args.method,
                   "mmmd|gamma|mmmmd|mmd-perm|block|linear|cross");
  test->add_option("--kernel", test_args.kernel, "gaussian|laplace|linear");
  test->add_option("--bandwidth", test_args.bandwidth, "median|median:<f>|<lambda>|minimax:<beta>");
  test->add_option("--kernels", test_args.kernels, "mmmmd list, e.g. gaussian:1,gaussian:2");
  test->add_option("--bandwidth-base", test_args.bandwidth_base, "base rule for --kernels");
  test->add_option("--alpha", test_args.alpha, "significance level");
  test->add_option("--gamma", test_args.gamma, "gamma in [0,1] for --method gamma");
  test->add_option("--perms", test_args.perms, "permutation count for mmd-perm");
  test->add_option("--block-size", test_args.block_size, "block size (default floor(sqrt(n)))");
  test->add_option("--x", test_args.x_path, "CSV with sample X")->required();
  test->add_option("--y", test_args.y_path, "CSV with sample Y")->required();
  test->add_option("--seed", test_args.seed, "seed for permutations/shuffle");
  test->add_flag("--shuffle", test_args.shuffle, "seeded pre-shuffle of pair order");

  ExperimentArgs null_args;
  null_args.reps = 2000;
  auto* simnull = app.add_subcommand("simulate-null", "null-distribution simulation");
  simnull->add_option("--n", null_args.n, "sample size");
  simnull->add_option("--d", null_args.d, "dimension");
  simnull->add_option("--dist", null_args.dist, "gaussian|t");
  simnull->add_option("--df", null_args.df, "t degrees of freedom");
  simnull->add_option("--kernel", null_args.kernel, "kernel family");
  simnull->add_option("--bandwidth", null_args.bandwidth, "bandwidth rule");
  simnull->add_option("--methods", null_args.methods, "comma list of methods");
  simnull->add_option("--reps", null_args.reps, "replications");
  simnull->add_option("--alpha", null_args.alpha, "significance level");
  simnull->add_option("--seed", null_args.seed, "seed");
  simnull->add_option("--out", null_args.out, "output base path")->required();

  ExperimentArgs power_args;
  power_args.dist = "mean-shift";
  power_args.n_grid = "100,200,300,400,500";
  power_args.methods = "mmmd,cross,block,linear,mmd-perm";
  auto* power = app.add_subcommand("power", "power curves over an n grid");
  power->add_option("--config", power_args.config_path, "JSON experiment config");
  power->add_option("--dist", power_args.dist, "mean-shift|ar-cov-scale|gaussian|t");
  power->add_option("--d", power_args.d, "dimension");
  power->add_option("--j", power_args.j, "shifted coordinates");
  power->add_option("--eps", power_args.eps, "shift size");
  power->add_option("--rho", power_args.rho, "AR(1) correlation");
  power->add_option("--scale", power_args.scale, "covariance multiplier");
  power->add_option("--n-grid", power_args.n_grid, "comma list of sample sizes");
  power->add_option("--methods", power_args.methods, "comma list of methods");
  power->add_option("--kernel", power_args.kernel, "kernel family");
  power->add_option("--bandwidth", power_args.bandwidth, "bandwidth rule");
  power->add_option("--reps", power_args.reps, "replications");
  power->add_option("--alpha", power_args.alpha, "significance level");
  power->add_option("--seed", power_args.seed, "seed");
  power->add_option("--out", power_args.out, "output base path");

  ExperimentArgs bench_args;
  bench_args.n_grid = "500,1000,2000";
  bench_args.methods = "mmmd,mmd-perm";
  bench_args.reps = 3;
  auto* bench = app.add_subcommand("bench", "wall-clock benchmark");
  bench->add_option("--n-grid", bench_args.n_grid, "comma list of sample sizes");
  bench->add_option("--d", bench_args.d, "dimension");
  bench->add_option("--dist", bench_args.dist, "data distribution");
  bench->add_option("--methods", bench_args.methods, "comma list of methods");
  bench->add_option("--kernel", bench_args.kernel, "kernel family");
  bench->add_option("--bandwidth", bench_args.bandwidth, "bandwidth rule");
  bench->add_option("--reps", bench_args.reps, "replications (median reported)");
  bench->add_option("--seed", bench_args.seed, "seed");
  bench->add_option("--out", bench_args.out, "output base path");

  auto* check = app.add_subcommand("check", "numeric lemma checks");
  check->require_subcommand(1);
  long sn_n = 100000;
  auto* sn = check->add_subcommand("sn-limit", "weight-sum limit S_n -> 5");
  sn->add_option("--n", sn_n, "evaluation point");

  ExperimentArgs av_args;
  av_args.dist = "mean-shift";
  av_args.d = 1;
  av_args.j = 1;
  av_args.eps = 0.5;
  av_args.kernel = "linear";
  av_args.n = 2000;
  av_args.reps = 1000;
  long aux_m = 5000;
  auto* av = check->add_subcommand("alt-variance", "alternative CLT variance ratio");
  av->add_option("--dist", av_args.dist, "alternative generator");
  av->add_option("--d", av_args.d, "dimension");
  av->add_option("--j", av_args.j, "shifted coordinates");
  av->add_option("--eps", av_args.eps, "shift size");
  av->add_option("--kernel", av_args.kernel, "kernel family");
  av->add_option("--bandwidth", av_args.bandwidth, "bandwidth rule (fixed recommended)");
  av->add_option("--n", av_args.n, "per-replication sample size");
  av->add_option("--reps", av_args.reps, "replications");
  av->add_option("--aux-m", aux_m, "auxiliary sample size for the moments");
  av->add_option("--seed", av_args.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*test) return run_test(test_args);

    if (*simnull) {
      null_args.threads = threads;
      const ExperimentConfig config = make_config(null_args, /*null_only=*/true,
                                                  /*grid_default_single=*/true);
      const ExperimentReport report = simulate_null(config);
      print_cells(report);
      write_outputs(config, report, "simulate-null", /*samples=*/true);
      return 0;
    }

    if (*power) {
      power_args.threads = threads;
      const ExperimentConfig config =
          power_args.config_path.empty()
              ? make_config(power_args, false, false)
              : config_from_json(power_args.config_path, threads);
      const ExperimentReport report = power_curve(config);
      print_cells(report);
      write_outputs(config, report, "power", /*samples=*/false);
      return 0;
    }

    if (*bench) {
      bench_args.threads = threads;
      const ExperimentConfig config = make_config(bench_args, false, false);
      const ExperimentReport report = runtime_bench(config);
      print_cells(report);
      write_outputs(config, report, "bench", /*samples=*/false);
      return 0;
    }

    if (*sn) {
      const double s = sn_limit_check(static_cast<Index>(sn_n));
      std::cout << "S_n(" << sn_n << ") = " << format_double(s) << '\n';
      return std::abs(s - 5.0) <= 0.05 ? 0 : 1;
    }

    if (*av) {
      av_args.bandwidth = av_args.bandwidth.empty() ? "1.0" : av_args.bandwidth;
      const GeneratorSpec gen = make_generator(av_args, /*null_only=*/false);
      KernelSpec spec;
      spec.family = parse_family(av_args.kernel);
      spec.bandwidth = spec.family == KernelFamily::Linear
                           ? BandwidthRule::fixed(1.0)
                           : BandwidthFlag::parse(av_args.bandwidth)
                                 .materialize(static_cast<Index>(av_args.n), av_args.d);
      const AltVarianceResult res =
          alt_variance_check(gen, spec, static_cast<Index>(av_args.n), av_args.reps,
                             static_cast<Index>(aux_m), av_args.seed);
      std::cout << "ratio = " << format_double(res.ratio)
                << " (mmd_sq_hat = " << format_double(res.mmd_sq_hat)
                << ", var_h_hat = " << format_double(res.var_h_hat) << ")";
      if (res.unreliable) std::cout << " [unreliable: reps too small]";
      std::cout << '\n';
      return (res.ratio >= 0.7 && res.ratio <= 1.3) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mmd
