#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "thermo/kernels.hpp"

using namespace thermo::kernels;

TEST_CASE("pairwise sum matches long double accumulation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> xs(100001);
  long double ref = 0.0L;
  for (double& x : xs) {
    x = dist(rng);
    ref += (long double)x;
  }
  CHECK(pairwise_sum(xs) == doctest::Approx((double)ref).epsilon(1e-12));
  CHECK(pairwise_sum({}) == 0.0);
  CHECK(pairwise_sum({2.5}) == 2.5);
}

TEST_CASE("serial and openmp reductions agree bitwise") {
  auto f = [](long n) {
    double x = (double)n;
    return std::exp(-1e-5 * x) * std::cos(0.1 * x);
  };
  for (long n : {1L, 100L, 8192L, 8193L, 300000L}) {
    double a = sum_indexed_serial(0L, n, f);
    double b = sum_indexed_omp(0L, n, f);
    CHECK(a == b);
  }
  CHECK(sum_indexed_serial(5L, 5L, f) == 0.0);
  CHECK(max_indexed(0L, 100000L, f) == doctest::Approx(1.0));
}

TEST_CASE("renewal dp against direct convolution") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 0.5);
  long n = 60;
  std::vector<double> log_u(n + 1);
  for (long k = 1; k <= n; ++k) log_u[k] = dist(rng);

  std::vector<double> z(n + 1, 0.0);
  z[0] = 1.0;
  for (long m = 1; m <= n; ++m)
    for (long k = 1; k <= m; ++k) z[m] += std::exp(log_u[k]) * z[m - k];

  auto log_z = renewal_log_dp_serial(log_u, n);
  REQUIRE(log_z.size() == (size_t)n + 1);
  for (long m = 0; m <= n; ++m)
    CHECK(log_z[m] == doctest::Approx(std::log(z[m])).epsilon(1e-10));

  auto log_z_omp = renewal_log_dp_omp(log_u, n);
  CHECK(log_z == log_z_omp);
}

TEST_CASE("renewal dp closed form for unit weights") {
  // u_k = 1 for every k gives z_n = 2^(n-1)
  long n = 40;
  std::vector<double> log_u(n + 1, 0.0);
  auto log_z = renewal_log_dp_serial(log_u, n);
  for (long m = 1; m <= n; ++m)
    CHECK(log_z[m] == doctest::Approx((m - 1) * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("renewal dp handles missing return times") {
  // returns only at even times: u_2 = 1, others absent
  long n = 11;
  double ninf = -1.0 / 0.0;
  std::vector<double> log_u(n + 1, ninf);
  log_u[2] = 0.0;
  auto log_z = renewal_log_dp_serial(log_u, n);
  for (long m = 1; m <= n; ++m) {
    if (m % 2 == 0)
      CHECK(log_z[m] == doctest::Approx(0.0));
    else
      CHECK(log_z[m] == ninf);
  }
}

TEST_CASE("dp equality serial vs openmp on larger instance") {
  long n = 1500;
  std::vector<double> log_u(n + 1);
  for (long k = 1; k <= n; ++k)
    log_u[k] = -0.2 * (double)k + 0.3 * std::sin((double)k);
  CHECK(renewal_log_dp_serial(log_u, n) == renewal_log_dp_omp(log_u, n));
}
