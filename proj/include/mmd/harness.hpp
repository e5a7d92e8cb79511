#pragma once

#include "mmd/baselines.hpp"
#include "mmd/datagen.hpp"
#include "mmd/multikernel.hpp"
#include "mmd/statcore.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mmd {

// A test procedure the experiment drivers can run per replication.
struct MethodSpec {
  TestMethod kind = TestMethod::Mmmd;
  double gamma = 1.0;                          // GammaFamily
  int num_perms = 200;                         // PermMmd
  Index block_size = 0;                        // BlockMmd; 0 = floor(sqrt(n))
  std::vector<double> multi_factors = {1, 2, 4};  // MultiKernel median multipliers
  std::vector<KernelFamily> multi_families;       // per factor; empty = config kernel family

  std::string label() const;
  static MethodSpec parse(const std::string& name);  // "mmmd", "gamma:0.5", ...
};

struct ExperimentConfig {
  GeneratorSpec generator;           // template; n is overridden by n_grid
  std::vector<Index> n_grid;         // nonempty, ascending
  std::vector<MethodSpec> methods;   // at least one
  KernelSpec kernel;                 // shared kernel for single-kernel methods
  int reps = 1;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string output_path;           // base path for CSV/JSON; empty = no files
  int threads = 0;                   // 0 = hardware concurrency

  void validate() const;
};

struct CellRecord {
  std::string method;
  Index n = 0;
  int d = 0;
  double rejection_rate = 0.0;
  double mean_statistic = 0.0;
  std::optional<double> ks_distance;     // null sims only
  std::optional<double> mean_runtime_ns; // bench only (excluded from determinism)
};

struct ExperimentReport {
  std::vector<CellRecord> cells;
  // Raw statistic samples per cell, in replication order (null sims only).
  std::vector<std::vector<double>> samples;
};

// Runs a single method on a dataset. `seed` drives any internal randomness
// (permutation draws); deterministic methods ignore it.
TestOutcome run_method(const MethodSpec& method, const KernelSpec& kernel,
                       const PairedDataset& data, double alpha, std::uint64_t seed);

// reps independent datasets per (method, n) cell under P = Q; records the
// statistic samples, their KS distance to the method's null reference
// (standard normal, or chi-squared(r) for the multi-kernel test), and the
// type-I rate. Rejects generators whose P and Q differ structurally.
ExperimentReport simulate_null(const ExperimentConfig& config);

// Rejection rate per (method, n) under the configured generator.
ExperimentReport power_curve(const ExperimentConfig& config);

// Median wall-clock per statistic per (method, n); timing runs are
// single-threaded to stay comparable.
ExperimentReport runtime_bench(const ExperimentConfig& config);

// Var_reps(sqrt(n)(T_n - mmd_sq_hat)) / (5 * var_h_hat), with the moments
// estimated from one independent auxiliary sample of size aux_m.
struct AltVarianceResult {
  double ratio = 0.0;
  double mmd_sq_hat = 0.0;
  double var_h_hat = 0.0;
  bool unreliable = false;  // too few replications for a stable ratio
};

AltVarianceResult alt_variance_check(const GeneratorSpec& generator, const KernelSpec& kernel,
                                     Index n, int reps, Index aux_m, std::uint64_t seed);

// S_n = (1/n)[sum ((i-1)/i)^2 + 2 sum ((i-1)/i) sum_{j>i} 1/j
//             + sum (sum_{j>i} 1/j)^2], evaluated exactly in O(n); tends to 5.
double sn_limit_check(Index n);

// Per-cell replication r uses split_seed(seed, cell_index*reps + r), so any
// single replication can be reproduced in isolation.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t cell_index, int reps, int rep);

}  // namespace mmd
