#pragma once

#include "mmd/rng.hpp"
#include "mmd/types.hpp"

#include <cstdint>

namespace mmd {

// Seeded synthetic generators for the simulation settings: Gaussian mean
// shift, multivariate t (null), AR(1)-covariance scaling, standard Gaussian.
struct GeneratorSpec {
  enum class Kind { GaussianMeanShift, MultivariateT, ArCovScale, StdGaussian };

  Kind kind = Kind::StdGaussian;
  int d = 1;
  Index n = 2;
  std::uint64_t seed = 0;

  int j = 0;           // GaussianMeanShift: shifted coordinate count
  double eps = 0.0;    // GaussianMeanShift: shift size
  int df = 10;         // MultivariateT: degrees of freedom
  double rho = 0.5;    // ArCovScale: AR(1) correlation
  double scale = 1.0;  // ArCovScale: covariance multiplier for Q

  static GeneratorSpec std_gaussian(int d, Index n, std::uint64_t seed);
  static GeneratorSpec gaussian_mean_shift(int d, int j, double eps, Index n,
                                           std::uint64_t seed);
  static GeneratorSpec multivariate_t(int d, int df, Index n, std::uint64_t seed);
  static GeneratorSpec ar_cov_scale(int d, double rho, double scale, Index n,
                                    std::uint64_t seed);

  // True when P and Q coincide structurally (not merely for degenerate
  // parameter values such as eps = 0).
  bool is_structurally_null() const {
    return kind == Kind::StdGaussian || kind == Kind::MultivariateT;
  }

  void validate() const;
};

PairedDataset generate(const GeneratorSpec& spec);

// Reorders the pairs (jointly in X and Y) with a seeded Fisher-Yates pass.
PairedDataset shuffled_pairs(const PairedDataset& data, std::uint64_t seed);

}  // namespace mmd
