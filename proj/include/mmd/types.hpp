#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>

namespace mmd {

// Observations are rows; row-major storage keeps each observation contiguous.
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

// Equal-length samples from P and Q, paired positionally as Z_i = (X_i, Y_i).
class PairedDataset {
 public:
  PairedDataset(SampleMatrix x, SampleMatrix y);

  Index n() const { return x_.rows(); }
  Index dim() const { return x_.cols(); }

  const SampleMatrix& x() const { return x_; }
  const SampleMatrix& y() const { return y_; }

  const double* x_row(Index i) const { return x_.data() + i * x_.cols(); }
  const double* y_row(Index i) const { return y_.data() + i * y_.cols(); }

 private:
  SampleMatrix x_;
  SampleMatrix y_;
};

enum class TestMethod {
  Mmmd,
  GammaFamily,
  MultiKernel,
  PermMmd,
  BlockMmd,
  LinearMmd,
  CrossMmd,
};

std::string to_string(TestMethod m);

struct TestOutcome {
  TestMethod method = TestMethod::Mmmd;
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;
  bool degenerate = false;
  std::map<std::string, double> diagnostics;  // bandwidth, n, d, runtime_ns, ...
};

}  // namespace mmd
