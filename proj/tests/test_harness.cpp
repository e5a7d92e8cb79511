#include "mmd/harness.hpp"

#include "mmd/distfn.hpp"

#include <doctest.h>

#include <cmath>

using namespace mmd;

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.generator = GeneratorSpec::std_gaussian(3, 2, 0);
  c.n_grid = {64};
  c.methods = {MethodSpec{}};
  c.kernel = {KernelFamily::Gaussian, BandwidthRule::median()};
  c.reps = 50;
  c.alpha = 0.05;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("sn_limit_check values") {
  // n=2: (1/2)[(1/2)^2 + 0 + (1/2)^2] = 1/4 -- the middle sum is empty since
  // the inner tail starts above i and the i=1 factor vanishes.
  CHECK(sn_limit_check(2) == doctest::Approx(0.25).epsilon(1e-15));

  // n=3 by hand: A = 0 + 1/4 + 4/9; B = 0 + (1/2)(1/3) + 0; C = (1/2+1/3)^2 + (1/3)^2
  const double a = 0.25 + 4.0 / 9.0;
  const double b = 1.0 / 6.0;
  const double c = (5.0 / 6.0) * (5.0 / 6.0) + 1.0 / 9.0;
  CHECK(sn_limit_check(3) == doctest::Approx((a + 2 * b + c) / 3.0).epsilon(1e-14));

  CHECK(std::abs(sn_limit_check(100000) - 5.0) <= 0.05);

  double prev = 0.0;
  for (Index n : {100, 1000, 10000, 100000}) {
    const double s = sn_limit_check(n);
    CHECK(s >= prev - 1e-9);
    CHECK(s < 5.0);
    prev = s;
  }
  CHECK_THROWS(sn_limit_check(1));
}

TEST_CASE("simulate_null basics") {
  ExperimentConfig c = base_config();
  c.reps = 200;
  const ExperimentReport report = simulate_null(c);
  REQUIRE(report.cells.size() == 1);
  REQUIRE(report.samples.size() == 1);
  CHECK(report.samples[0].size() == 200);
  CHECK(report.cells[0].ks_distance.has_value());
  CHECK(*report.cells[0].ks_distance <= 1.0);
  CHECK(report.cells[0].rejection_rate >= 0.0);
  CHECK(report.cells[0].rejection_rate <= 1.0);
  CHECK_FALSE(report.cells[0].mean_runtime_ns.has_value());

  SUBCASE("alternative generators are rejected") {
    ExperimentConfig bad = c;
    bad.generator = GeneratorSpec::gaussian_mean_shift(3, 1, 0.0, 2, 0);
    CHECK_THROWS(simulate_null(bad));
  }
  SUBCASE("reps=1 keeps the report well-formed") {
    ExperimentConfig one = c;
    one.reps = 1;
    const ExperimentReport r = simulate_null(one);
    REQUIRE(r.samples[0].size() == 1);
    const double x = r.samples[0][0];
    const double f = std_normal_cdf(x);
    CHECK(*r.cells[0].ks_distance == doctest::Approx(std::max(f, 1.0 - f)).epsilon(1e-12));
  }
}

TEST_CASE("results are independent of the thread count") {
  ExperimentConfig c = base_config();
  c.reps = 40;
  c.threads = 1;
  const ExperimentReport serial = simulate_null(c);
  c.threads = 4;
  const ExperimentReport parallel = simulate_null(c);
  REQUIRE(serial.samples.size() == parallel.samples.size());
  for (std::size_t i = 0; i < serial.samples[0].size(); ++i) {
    CHECK(serial.samples[0][i] == parallel.samples[0][i]);
  }
  CHECK(serial.cells[0].rejection_rate == parallel.cells[0].rejection_rate);
}

TEST_CASE("replication seeds only depend on (seed, cell, rep)") {
  CHECK(replication_seed(7, 3, 100, 5) == replication_seed(7, 3, 100, 5));
  CHECK(replication_seed(7, 3, 100, 5) != replication_seed(7, 3, 100, 6));
  CHECK(replication_seed(7, 2, 100, 5) != replication_seed(7, 3, 100, 5));
}

TEST_CASE("power_curve with eps=0 stays near the level") {
  ExperimentConfig c = base_config();
  c.generator = GeneratorSpec::gaussian_mean_shift(5, 2, 0.0, 2, 0);
  c.n_grid = {100};
  c.methods = {MethodSpec::parse("mmmd"), MethodSpec::parse("cross"),
               MethodSpec::parse("linear")};
  c.reps = 500;
  const ExperimentReport report = power_curve(c);
  for (const CellRecord& cell : report.cells) {
    CHECK(std::abs(cell.rejection_rate - c.alpha) <= 0.03);
  }
}

TEST_CASE("power rises with n under a real shift") {
  ExperimentConfig c = base_config();
  c.generator = GeneratorSpec::gaussian_mean_shift(10, 5, 0.3, 2, 0);
  c.n_grid = {50, 200};
  c.reps = 100;
  const ExperimentReport report = power_curve(c);
  REQUIRE(report.cells.size() == 2);
  CHECK(report.cells[1].rejection_rate >= report.cells[0].rejection_rate);
}

TEST_CASE("doubling reps halves the binomial variance of the rates") {
  ExperimentConfig c = base_config();
  c.generator = GeneratorSpec::gaussian_mean_shift(6, 3, 0.35, 2, 0);
  c.n_grid = {80, 110, 140, 170, 200};
  c.methods = {MethodSpec::parse("mmmd"), MethodSpec::parse("cross"),
               MethodSpec::parse("gamma:0.5")};
  c.reps = 500;
  const ExperimentReport small = power_curve(c);
  c.reps = 1000;
  const ExperimentReport big = power_curve(c);

  // Aggregate variance estimates p(1-p)/reps over the cells, then compare:
  // the pooled ratio should halve within 5%.
  double v_small = 0.0, v_big = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < small.cells.size(); ++i) {
    const double p1 = small.cells[i].rejection_rate;
    const double p2 = big.cells[i].rejection_rate;
    if (p1 <= 0.02 || p1 >= 0.98 || p2 <= 0.02 || p2 >= 0.98) continue;
    v_small += p1 * (1.0 - p1) / 500.0;
    v_big += p2 * (1.0 - p2) / 1000.0;
    ++cells;
  }
  REQUIRE(cells >= 8);
  const double ratio = v_big / v_small;
  CHECK(ratio >= 0.5 / 1.05);
  CHECK(ratio <= 0.5 * 1.05);
}

TEST_CASE("runtime_bench timings are positive and grow with n") {
  ExperimentConfig c = base_config();
  c.n_grid = {256, 512, 1024};
  c.reps = 3;
  const ExperimentReport report = runtime_bench(c);
  REQUIRE(report.cells.size() == 3);
  double prev = 0.0;
  for (const CellRecord& cell : report.cells) {
    REQUIRE(cell.mean_runtime_ns.has_value());
    CHECK(*cell.mean_runtime_ns > 0.0);
    CHECK(*cell.mean_runtime_ns >= prev);
    prev = *cell.mean_runtime_ns;
  }
}

TEST_CASE("alt_variance_check flags tiny replication counts") {
  const GeneratorSpec gen = GeneratorSpec::gaussian_mean_shift(1, 1, 0.5, 2, 0);
  const KernelSpec k{KernelFamily::Linear, BandwidthRule::fixed(1.0)};
  const AltVarianceResult res = alt_variance_check(gen, k, 100, 2, 200, 5);
  CHECK(res.unreliable);
  CHECK(res.ratio > 0.0);
  CHECK_THROWS(alt_variance_check(gen, k, 100, 1, 200, 5));
}

TEST_CASE("experiment config validation") {
  ExperimentConfig c = base_config();
  c.n_grid = {};
  CHECK_THROWS(c.validate());
  c = base_config();
  c.n_grid = {200, 100};
  CHECK_THROWS(c.validate());
  c = base_config();
  c.reps = 0;
  CHECK_THROWS(c.validate());
  c = base_config();
  c.alpha = 1.5;
  CHECK_THROWS(c.validate());
  c = base_config();
  c.methods.clear();
  CHECK_THROWS(c.validate());
}
