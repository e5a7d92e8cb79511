#include "mmd/distfn.hpp"

#include <doctest.h>

#include <cmath>

using namespace mmd;

// Reference values computed with mpmath at 30 decimal digits.

TEST_CASE("std_normal_cdf against high-precision reference") {
  struct Ref {
    double x;
    double phi;
  };
  const Ref refs[] = {
      {-8, 6.2209605742717841e-16},
      {-5, 2.8665157187919391e-7},
      {-3, 0.0013498980316300945},
      {-1.959963984540054, 0.025000000000000014},
      {-1, 0.15865525393145705},
      {-0.5, 0.3085375387259869},
      {0, 0.5},
      {0.3, 0.61791142218895264},
      {1, 0.84134474606854295},
      {1.644853626951473, 0.95000000000000003},
      {2.5, 0.99379033467422386},
      {4, 0.99996832875816688},
      {6, 0.99999999901341235},
  };
  for (const auto& r : refs) {
    CHECK(std::abs(std_normal_cdf(r.x) - r.phi) <= 1e-13);
  }
  CHECK(std::abs(std_normal_cdf(1.959964) - 0.975) <= 1e-6);
}

TEST_CASE("std_normal_cdf symmetry") {
  const double xs[] = {0.1, 0.7, 1.3, 2.9, 4.2, 7.5};
  for (double x : xs) {
    CHECK(std::abs(std_normal_cdf(-x) - (1.0 - std_normal_cdf(x))) <= 1e-14);
  }
}

TEST_CASE("std_normal_quantile reference and round trip") {
  struct Ref {
    double p;
    double z;
  };
  const Ref refs[] = {
      {1e-6, -4.7534243088228989},
      {0.001, -3.0902323061678135},
      {0.025, -1.9599639845400542},
      {0.05, -1.6448536269514727},
      {0.5, 0.0},
      {0.9, 1.2815515655446005},
      {0.95, 1.6448536269514727},
      {0.975, 1.9599639845400542},
      {0.999999, 4.7534243088228989},
  };
  for (const auto& r : refs) {
    CHECK(std::abs(std_normal_quantile(r.p) - r.z) <= 1e-9);
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(r.p)) - r.p) <= 1e-10);
  }
  CHECK(std_normal_quantile(0.5) == 0.0);
  CHECK(std::abs(std_normal_quantile(0.95) - 1.644854) <= 1e-6);
  CHECK_THROWS(std_normal_quantile(0.0));
  CHECK_THROWS(std_normal_quantile(1.0));
  CHECK_THROWS(std_normal_quantile(-0.2));
}

TEST_CASE("chi2_quantile reference") {
  struct Ref {
    int r;
    double p;
    double q;
  };
  const Ref refs[] = {
      {1, 0.01, 0.00015708785790970198}, {1, 0.5, 0.45493642311957275},
      {1, 0.95, 3.841458820694126},      {1, 0.99, 6.6348966010212151},
      {2, 0.01, 0.020100671707002882},   {2, 0.5, 1.3862943611198906},
      {2, 0.95, 5.991464547107982},      {3, 0.5, 2.3659738843753383},
      {3, 0.95, 7.81472790325118},       {5, 0.95, 11.070497693516354},
      {10, 0.95, 18.307038053275147},    {10, 0.99, 23.20925115895436},
      {30, 0.5, 29.336031516661586},     {30, 0.99, 50.892181311517091},
  };
  for (const auto& r : refs) {
    CHECK(std::abs(chi2_quantile(r.r, r.p) - r.q) <= 1e-8 * std::max(1.0, r.q));
  }
  CHECK(std::abs(chi2_quantile(1, 0.95) - 3.841459) <= 1e-5);
  // chi-squared(2) is Exp(1/2): median is 2*ln(2).
  CHECK(std::abs(chi2_quantile(2, 0.5) - 2.0 * std::log(2.0)) <= 1e-10);
  CHECK_THROWS(chi2_quantile(0, 0.5));
  CHECK_THROWS(chi2_quantile(3, 0.0));
}

TEST_CASE("chi2_quantile monotone in p") {
  for (int r : {1, 2, 7}) {
    double last = 0.0;
    for (double p = 0.05; p < 1.0; p += 0.05) {
      const double q = chi2_quantile(r, p);
      CHECK(q > last);
      last = q;
    }
  }
}

TEST_CASE("chi2_quantile(1, p) equals squared normal quantile") {
  for (double p : {0.1, 0.3, 0.5, 0.8, 0.95, 0.99}) {
    const double z = std_normal_quantile((1.0 + p) / 2.0);
    CHECK(std::abs(chi2_quantile(1, p) - z * z) <= 1e-7 * std::max(1.0, z * z));
  }
}

TEST_CASE("chi2_cdf reference and round trip") {
  CHECK(std::abs(chi2_cdf(1, 3.841458820694124) - 0.95) <= 1e-12);
  CHECK(std::abs(chi2_cdf(2, 1.3862943611198906) - 0.5) <= 1e-12);
  CHECK(std::abs(chi2_cdf(3, 7.0) - 0.92810222750353487) <= 1e-12);
  CHECK(std::abs(chi2_cdf(10, 3.94) - 0.049986909209909281) <= 1e-12);
  CHECK(chi2_cdf(4, 0.0) == 0.0);
  CHECK(chi2_cdf(4, -1.0) == 0.0);
  for (int r : {1, 3, 9}) {
    for (double p : {0.2, 0.5, 0.9}) {
      CHECK(std::abs(chi2_cdf(r, chi2_quantile(r, p)) - p) <= 1e-10);
    }
  }
}

TEST_CASE("ks_distance basics") {
  SUBCASE("sample at exact quantiles") {
    const std::size_t m = 20;
    std::vector<double> v;
    for (std::size_t i = 1; i <= m; ++i) {
      v.push_back(std_normal_quantile((i - 0.5) / m));
    }
    const double d = ks_distance(EmpiricalSample(v), [](double x) { return std_normal_cdf(x); });
    CHECK(std::abs(d - 0.5 / m) <= 1e-12);
  }
  SUBCASE("constant sample at zero") {
    const double d =
        ks_distance(EmpiricalSample({0.0}), [](double x) { return std_normal_cdf(x); });
    CHECK(d == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("always in [0,1]") {
    std::vector<double> v = {-3.0, -1.0, 0.5, 2.0, 9.0};
    const double d = ks_distance(EmpiricalSample(v), [](double x) { return std_normal_cdf(x); });
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
  }
  SUBCASE("empty or non-finite samples rejected") {
    CHECK_THROWS(EmpiricalSample({}));
    CHECK_THROWS(EmpiricalSample({0.0, std::nan("")}));
  }
}
