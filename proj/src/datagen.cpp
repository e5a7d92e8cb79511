#include "mmd/datagen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmd {

GeneratorSpec GeneratorSpec::std_gaussian(int d, Index n, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::StdGaussian;
  s.d = d;
  s.n = n;
  s.seed = seed;
  s.validate();
  return s;
}

GeneratorSpec GeneratorSpec::gaussian_mean_shift(int d, int j, double eps, Index n,
                                                 std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::GaussianMeanShift;
  s.d = d;
  s.j = j;
  s.eps = eps;
  s.n = n;
  s.seed = seed;
  s.validate();
  return s;
}

GeneratorSpec GeneratorSpec::multivariate_t(int d, int df, Index n, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::MultivariateT;
  s.d = d;
  s.df = df;
  s.n = n;
  s.seed = seed;
  s.validate();
  return s;
}

GeneratorSpec GeneratorSpec::ar_cov_scale(int d, double rho, double scale, Index n,
                                          std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::ArCovScale;
  s.d = d;
  s.rho = rho;
  s.scale = scale;
  s.n = n;
  s.seed = seed;
  s.validate();
  return s;
}

void GeneratorSpec::validate() const {
  if (d < 1) throw std::invalid_argument("GeneratorSpec: d must be >= 1");
  if (n < 2) throw std::invalid_argument("GeneratorSpec: n must be >= 2");
  switch (kind) {
    case Kind::GaussianMeanShift:
      if (j < 1 || j > d) throw std::invalid_argument("GeneratorSpec: need 1 <= j <= d");
      if (!std::isfinite(eps)) throw std::invalid_argument("GeneratorSpec: eps non-finite");
      break;
    case Kind::MultivariateT:
      if (df <= 2) throw std::invalid_argument("GeneratorSpec: df must exceed 2");
      break;
    case Kind::ArCovScale:
      if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("GeneratorSpec: rho outside (-1,1)");
      if (!(scale > 0.0)) throw std::invalid_argument("GeneratorSpec: scale must be positive");
      break;
    case Kind::StdGaussian:
      break;
  }
}

namespace {

void fill_gaussian(SampleMatrix& m, SplitMix64& rng) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index c = 0; c < m.cols(); ++c) m(i, c) = rng.normal();
  }
}

// One t_d(df) row: Z / sqrt(S/df) with S a chi-squared(df) draw.
void fill_t_row(SampleMatrix& m, Index row, int df, SplitMix64& rng) {
  for (Index c = 0; c < m.cols(); ++c) m(row, c) = rng.normal();
  double s = 0.0;
  for (int k = 0; k < df; ++k) {
    const double g = rng.normal();
    s += g * g;
  }
  m.row(row) /= std::sqrt(s / df);
}

// AR(1) row with Cov(v_a, v_b) = rho^{|a-b|}, scaled by sqrt(amp).
void fill_ar_row(SampleMatrix& m, Index row, double rho, double amp, SplitMix64& rng) {
  const double innov = std::sqrt(1.0 - rho * rho);
  double prev = rng.normal();
  m(row, 0) = prev;
  for (Index c = 1; c < m.cols(); ++c) {
    prev = rho * prev + innov * rng.normal();
    m(row, c) = prev;
  }
  if (amp != 1.0) m.row(row) *= std::sqrt(amp);
}

}  // namespace

PairedDataset generate(const GeneratorSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  SampleMatrix x(spec.n, spec.d);
  SampleMatrix y(spec.n, spec.d);

  switch (spec.kind) {
    case GeneratorSpec::Kind::StdGaussian:
      fill_gaussian(x, rng);
      fill_gaussian(y, rng);
      break;
    case GeneratorSpec::Kind::GaussianMeanShift: {
      fill_gaussian(x, rng);
      fill_gaussian(y, rng);
      for (Index i = 0; i < spec.n; ++i) {
        for (int c = 0; c < spec.j; ++c) y(i, c) += spec.eps;
      }
      break;
    }
    case GeneratorSpec::Kind::MultivariateT:
      for (Index i = 0; i < spec.n; ++i) fill_t_row(x, i, spec.df, rng);
      for (Index i = 0; i < spec.n; ++i) fill_t_row(y, i, spec.df, rng);
      break;
    case GeneratorSpec::Kind::ArCovScale:
      for (Index i = 0; i < spec.n; ++i) fill_ar_row(x, i, spec.rho, 1.0, rng);
      for (Index i = 0; i < spec.n; ++i) fill_ar_row(y, i, spec.rho, spec.scale, rng);
      break;
  }
  return PairedDataset(std::move(x), std::move(y));
}

PairedDataset shuffled_pairs(const PairedDataset& data, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(data.n()));
  std::iota(order.begin(), order.end(), Index{0});
  SplitMix64 rng(seed);
  shuffle(order, rng);

  SampleMatrix x(data.n(), data.dim());
  SampleMatrix y(data.n(), data.dim());
  for (Index i = 0; i < data.n(); ++i) {
    x.row(i) = data.x().row(order[static_cast<std::size_t>(i)]);
    y.row(i) = data.y().row(order[static_cast<std::size_t>(i)]);
  }
  return PairedDataset(std::move(x), std::move(y));
}

}  // namespace mmd
