#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rmscale/normal.hpp"
#include "rmscale/rng.hpp"
#include "support/test_helpers.hpp"

using namespace rmscale;

TEST_CASE("normal cdf matches a power-series reference on a wide grid") {
  for (double z = -4.0; z <= 4.0001; z += 0.125) {
    double got = std_normal_cdf(z);
    double ref = testutil::ref_normal_cdf(z);
    CHECK(std::abs(got - ref) < 1e-14);
    if (ref > 1e-6) CHECK(got / ref == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(1.959964) == doctest::Approx(0.975000000903557).epsilon(1e-12));
}

TEST_CASE("cdf is monotone and behaves at the far tails") {
  double prev = 0.0;
  for (double z = -38; z <= 38; z += 0.5) {
    double p = std_normal_cdf(z);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK(std_normal_cdf(-40.0) >= 0.0);
  CHECK(std_normal_cdf(40.0) == 1.0);
}

TEST_CASE("quantile inverts the cdf through the usable range") {
  for (double p = 0.001; p < 0.9995; p += 0.0105)
    CHECK(std_normal_cdf(std_normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));

  CHECK(std::abs(std_normal_quantile(0.5)) < 1e-15);
  CHECK(std_normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  // antisymmetry
  for (double p : {0.01, 0.117, 0.22, 0.3, 0.45})
    CHECK(std_normal_quantile(p) == doctest::Approx(-std_normal_quantile(1 - p)).epsilon(1e-12));
}

TEST_CASE("quantile rejects probabilities outside (0, 1)") {
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(-0.5), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.5), std::domain_error);
}

TEST_CASE("pdf matches the closed form") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(std_normal_pdf(2.0) ==
        doctest::Approx(std::exp(-2.0) * 0.3989422804014327).epsilon(1e-13));
}

TEST_CASE("normal draws have the right moments and tail mass") {
  RngStream r(31, 0);
  const int n = 1000000;
  double sum = 0, sumsq = 0;
  int inside = 0;
  for (int k = 0; k < n; ++k) {
    double z = draw_std_normal(r);
    sum += z;
    sumsq += z * z;
    inside += std::abs(z) < 1.959963984540054;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 5e-3);                       // 5 sigma
  CHECK(var == doctest::Approx(1.0).epsilon(0.008));
  CHECK(static_cast<double>(inside) / n == doctest::Approx(0.95).epsilon(0.002));
}

TEST_CASE("vector fill consumes the stream exactly like scalar draws") {
  RngStream a(5, 5), b(5, 5);
  Eigen::VectorXd v(7);
  draw_std_normal(a, v);
  for (int k = 0; k < 7; ++k) CHECK(v[k] == draw_std_normal(b));
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("exponential draws are positive with the requested mean") {
  RngStream r(8, 2);
  const int n = 400000;
  double sum = 0, lo = 1e300;
  for (int k = 0; k < n; ++k) {
    double x = draw_exponential(r, 2.0);
    sum += x;
    lo = std::min(lo, x);
  }
  CHECK(lo > 0.0);
  CHECK(sum / n == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("gamma draws match gamma moments for shapes on both sides of 1") {
  RngStream r(8, 3);
  const int n = 400000;
  for (double shape : {0.5, 1.0, 5.0}) {
    double sum = 0, sumsq = 0, lo = 1e300;
    for (int k = 0; k < n; ++k) {
      double x = draw_gamma(r, shape);
      sum += x;
      sumsq += x * x;
      lo = std::min(lo, x);
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(lo > 0.0);
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}
