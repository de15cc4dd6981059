#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tempopt/rng.hpp"
#include "tempopt/stats.hpp"

using namespace tempopt;

TEST_CASE("pairwise sum matches long-double accumulation") {
  Rng rng(7);
  std::vector<double> xs(10001);
  for (auto& x : xs) x = rng.normal() * 1e6 + 1.0;
  long double acc = 0.0L;
  for (double x : xs) acc += static_cast<long double>(x);
  const double ps = pairwise_sum(xs);
  CHECK(std::fabs(ps - static_cast<double>(acc)) <=
        1e-9 * std::fabs(static_cast<double>(acc)));
}

TEST_CASE("pairwise sum edge cases") {
  CHECK(pairwise_sum({}) == 0.0);
  const std::vector<double> one{3.5};
  CHECK(pairwise_sum(one) == 3.5);
}

TEST_CASE("mean and sample variance") {
  const std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(mean(xs) == Catch::Approx(5.0));
  CHECK(sample_variance(xs) == Catch::Approx(32.0 / 7.0));
}

TEST_CASE("quantiles, type 7") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 4.0);
  CHECK(quantile(xs, 0.5) == Catch::Approx(2.5));
  CHECK(quantile(xs, 0.25) == Catch::Approx(1.75));
}

TEST_CASE("chi-square survival against reference values") {
  // Reference values computed with an independent statistics package.
  struct Case {
    double x;
    int dof;
    double sf;
  };
  const Case cases[] = {
      {3.841458820694124, 1, 0.04999999999999989},
      {31.410432844230918, 20, 0.04999999999999999},
      {18.307038053275146, 10, 0.05000000000000005},
      {0.5, 3, 0.9188914116546758},
      {25.0, 10, 0.005345505487134069},
      {5.0, 2, 0.0820849986238988},
      {100.0, 20, 1.2596084591660847e-12},
      {0.001, 1, 0.9747728793699604},
      {7.2, 7, 0.40835740822481364},
  };
  for (const auto& c : cases) {
    CAPTURE(c.x, c.dof);
    CHECK(chi2_survival(c.x, c.dof) ==
          Catch::Approx(c.sf).epsilon(0).margin(1e-10));
  }
}

TEST_CASE("chi-square with two dof is exactly exponential") {
  for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
    CHECK(chi2_survival(x, 2) ==
          Catch::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("autocorrelation of an alternating series") {
  std::vector<double> xs(100);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = (i % 2 == 0) ? 1.0 : -1.0;
  CHECK(autocorrelation(xs, 1) == Catch::Approx(-1.0).margin(0.03));
}

TEST_CASE("rng determinism and substreams") {
  Rng a(123, 5, 0);
  Rng b(123, 5, 0);
  Rng c(123, 6, 0);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const double va = a.normal();
    all_equal = all_equal && va == b.normal();
    any_diff = any_diff || va != c.normal();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rng normal moments") {
  Rng rng(99);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  const double m = sum / n;
  const double v = sumsq / n - m * m;
  CHECK(std::fabs(m) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(v == Catch::Approx(1.0).margin(0.02));
}
