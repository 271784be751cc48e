#include <doctest.h>

#include <cmath>

#include "hw/psiexpr.hpp"
#include "oracles.hpp"

using namespace hw;

namespace {
ManifoldConfig cfg(int l, IrrationalParameter th = IrrationalParameter::sqrt2()) {
  ManifoldConfig c;
  c.l = l;
  c.theta = std::move(th);
  return c;
}

long double psi_sum_naive(int l, long double theta, long double x) {
  long double fact = 1;
  for (int i = 2; i < l; ++i) fact *= i;
  const long double c = 4.0L / (std::pow(2.0L, l) * fact);
  long double s = 0;
  for (long double m = 1; theta * m * m <= x; ++m)
    s += m * std::pow(x - theta * m * m, l - 1) * oracle::psi(x / (2 * m) - theta * m / 2 - l / 2.0L);
  return -c * s;
}
}  // namespace

TEST_CASE("psi-sum reference values") {
  // frozen from the mpmath derivation script
  CHECK(static_cast<double>(psi_sum_R(cfg(1), 4).value) == doctest::Approx(-0.5857864376269049512).epsilon(1e-15));
  CHECK(static_cast<double>(psi_sum_R(cfg(2), 4).value) == doctest::Approx(0.5355339059327376220).epsilon(1e-15));
  CHECK(static_cast<double>(psi_sum_R(cfg(1, IrrationalParameter::golden()), 100).value) ==
        doctest::Approx(-17.47524157501474079).epsilon(1e-14));
  CHECK(static_cast<double>(psi_sum_R(cfg(3), 50).value) == doctest::Approx(-918.4707661787552776).epsilon(1e-14));
  CHECK(psi_sum_R(cfg(1), 1.0).value == 0);  // θ > 1: no m
}

TEST_CASE("psi-sum agrees with a naive loop") {
  for (int l : {1, 2, 3})
    for (double x : {7.3, 123.4, 5678.9}) {
      const double got = static_cast<double>(psi_sum_R(cfg(l), x).value);
      CHECK(got == doctest::Approx(static_cast<double>(psi_sum_naive(l, oracle::kSqrt2, x))).epsilon(1e-12));
    }
}

TEST_CASE("residual of the psi expression grows no faster than x^(l-1/2)") {
  const auto p1 = residual_profile(cfg(1), log_spaced(1e2, 1e4, 60));
  REQUIRE(p1.slope.has_value());
  CHECK(*p1.slope < 0.6);
  const auto p2 = residual_profile(cfg(2), log_spaced(1e2, 3e3, 40));
  REQUIRE(p2.slope.has_value());
  CHECK(*p2.slope < 1.6);
  for (const auto& pt : p1.points) CHECK(pt.residual == doctest::Approx(static_cast<double>(pt.R_exact - pt.psi_sum)));
}

TEST_CASE("log-spaced grid") {
  const auto xs = log_spaced(10, 1000, 3);
  REQUIRE(xs.size() == 3);
  CHECK(xs[0] == doctest::Approx(10));
  CHECK(xs[1] == doctest::Approx(100));
  CHECK(xs[2] == doctest::Approx(1000));
}

TEST_CASE("truncated Fourier series of psi") {
  // direct evaluation of -Σ sin(2πhu)/(πh)
  for (double u : {0.1, 0.37, 0.5, 0.93}) {
    long double s = 0;
    for (int h = 1; h <= 20; ++h) s -= std::sin(2 * oracle::kPi * h * u) / (oracle::kPi * h);
    const ExpansionReport r = truncated_fourier_psi(u, 20);
    CHECK(r.value == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
    CHECK(std::fabs(psi(u) - r.value) <= 3 * r.envelope);
  }
}

TEST_CASE("Vaaler majorant holds pointwise") {
  for (double H : {3.0, 10.0, 37.5}) {
    for (int i = 0; i < 2000; ++i) {
      const double u = i / 2000.0 + 1e-7;
      const ExpansionReport r = vaaler_psi(u, H);
      CHECK(std::fabs(psi(u) - r.value) <= r.envelope + 1e-13);
    }
  }
  const auto co = vaaler_coefficients(50);
  CHECK(co.N == 50);
  CHECK(co.max_h_a <= 1 / M_PI + 1e-12);
  CHECK(co.max_H_b <= 0.5 + 1e-12);
}

TEST_CASE("G sum and its integral") {
  const auto c = cfg(1);
  // G(x, H) from its definition
  auto g_naive = [&](long double x, long double H) {
    long double s = 0;
    for (long double m = 1; oracle::kSqrt2 * m * m <= x; ++m) {
      const long double t = x / (2 * m) - oracle::kSqrt2 * m / 2 + 0.5L;
      const long double d = std::fabs(t - std::round(t));
      s += std::min(1.0L, 1.0L / (H * d));
    }
    return s;
  };
  for (double x : {10.0, 99.5, 1234.5})
    CHECK(static_cast<double>(g_sum(c, x, 100)) == doctest::Approx(static_cast<double>(g_naive(x, 100))).epsilon(1e-12));
  // integral against fine Simpson quadrature at small T, where the spikes are resolved
  const double T = 30, H = 20;
  const long double exact = g_integral(c, T, 2 * T, H);
  const long double quad = oracle::simpson([&](long double x) { return g_naive(x, H); }, T, 2 * T, 400000);
  CHECK(static_cast<double>(exact) == doctest::Approx(static_cast<double>(quad)).epsilon(1e-4));
}
