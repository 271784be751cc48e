#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "hw/kernel.hpp"
#include "oracles.hpp"

using namespace hw;

TEST_CASE("sqrt2 enclosure is tight and contains the value") {
  const auto th = IrrationalParameter::sqrt2();
  for (int bits : {64, 192, 1000}) {
    const Enclosure e = th.enclose(bits);
    CHECK(e.log2_width() <= 1 - bits);
    CHECK(e.lo_double() <= static_cast<double>(oracle::kSqrt2));
    CHECK(e.hi_double() >= static_cast<double>(oracle::kSqrt2));
  }
  CHECK(th.approx() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-16));
  CHECK(th.declared_type().value() == 1.0);
}

TEST_CASE("golden ratio from its constant continued fraction") {
  const auto pq = IrrationalParameter::partial_quotients({1, 1}, ContinuationRule::constant);
  CHECK(pq.approx() == doctest::Approx(static_cast<double>(oracle::kGolden)).epsilon(1e-16));
  const auto surd = IrrationalParameter::golden();
  CHECK(std::fabs(pq.approx_ld() - surd.approx_ld()) < 1e-18L);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(IrrationalParameter::quadratic_surd(0, 1, 1, 4), ConfigError);
  CHECK_THROWS_AS(IrrationalParameter::quadratic_surd(0, 0, 1, 2), ConfigError);
  CHECK_THROWS_AS(IrrationalParameter::quadratic_surd(0, 1, 0, 2), ConfigError);
  CHECK_THROWS_AS(IrrationalParameter::quadratic_surd(0, -1, 1, 2), ConfigError);  // negative value
  CHECK_THROWS_AS(IrrationalParameter::partial_quotients({1, 0, 2}, ContinuationRule::periodic), ConfigError);
  CHECK_THROWS_AS(IrrationalParameter::literal("1.5", 32), ConfigError);
  CHECK_THROWS_AS(IrrationalParameter::literal("abc", 64), ConfigError);
}

TEST_CASE("literal cannot be refined past its declared bits") {
  const auto lit = IrrationalParameter::literal("1.41421356237309504880168872420969807856967187537694", 160);
  CHECK_NOTHROW(lit.enclose(128));
  CHECK_THROWS_AS(lit.enclose(256), PrecisionError);
  CHECK_FALSE(lit.declared_type().has_value());
  CHECK_THROWS_AS(continued_fraction(lit, 200), PrecisionExhausted);
  try {
    continued_fraction(lit, 200);
  } catch (const PrecisionExhausted& e) {
    CHECK(e.max_certified_depth() > 30);
  }
}

TEST_CASE("sawtooth and distance to the nearest integer") {
  CHECK(psi(0.25) == -0.25);
  CHECK(psi(-0.25) == 0.25);
  CHECK(psi(3.0) == -0.5);
  CHECK(dist_to_int(2.75) == 0.25);
  CHECK(dist_to_int(-0.1) == doctest::Approx(0.1));
  const PsiValue p = psi(Enclosure::integer(7, 64));
  CHECK(p.boundary);
  const PsiValue q = psi(IrrationalParameter::sqrt2().enclose(128));
  CHECK_FALSE(q.boundary);
  CHECK(q.value == doctest::Approx(static_cast<double>(oracle::kSqrt2 - 1.5L)));
}

TEST_CASE("continued fraction of sqrt2 and its convergents") {
  const auto cf = continued_fraction(IrrationalParameter::sqrt2(), 12);
  REQUIRE(cf.quotients.size() == 12);
  CHECK(cf.quotients[0] == 1);
  for (std::size_t i = 1; i < 12; ++i) CHECK(cf.quotients[i] == 2);
  // Pell recurrence: p/q = 1/1, 3/2, 7/5, 17/12, ...
  CHECK(cf.convergents[3].p == 17);
  CHECK(cf.convergents[3].q == 12);
  for (const auto& c : cf.convergents) CHECK(c.p * c.p - 2 * c.q * c.q == ((&c - &cf.convergents[0]) % 2 ? 1 : -1));
}

TEST_CASE("approximation type of quadratic irrationals is near 1") {
  for (const auto& th : {IrrationalParameter::sqrt2(), IrrationalParameter::golden()}) {
    const TypeEstimate t = estimate_type(th, 100000);
    CHECK(t.estimate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(t.raw_sup > t.estimate);
  }
}

TEST_CASE("lower bound for |q theta| over integers and half-integers") {
  const auto r = check_qtheta_lower_bound(IrrationalParameter::sqrt2(), 1.0, 0.01, 10000);
  CHECK(r.holds);
  CHECK(r.min_ratio > 0.1);
  CHECK(r.min_ratio_integer > 0.3);
  CHECK(r.min_ratio_half < r.min_ratio_integer);
  // γ below the true type: minima decay across dyadic ranges
  const auto bad = check_qtheta_lower_bound(IrrationalParameter::golden(), 0.5, 0.0, 10000);
  CHECK_FALSE(bad.holds);
  CHECK(bad.trend_slope < kQThetaTrendFloor);
}

TEST_CASE("half-integer multiples use the doubled representation") {
  const Enclosure th = IrrationalParameter::sqrt2().enclose(128);
  const double d = dist_qtheta(th, HalfIntegerQ{5});  // q = 2.5
  const long double x = 2.5L * oracle::kSqrt2;
  CHECK(d == doctest::Approx(static_cast<double>(std::fabs(x - std::round(x)))));
}

TEST_CASE("HW_PRECISION_BITS overrides the default precision") {
  ::setenv("HW_PRECISION_BITS", "512", 1);
  CHECK(default_precision_bits() == 512);
  ::setenv("HW_PRECISION_BITS", "12", 1);
  CHECK(default_precision_bits() == kDefaultPrecisionBits);
  ::unsetenv("HW_PRECISION_BITS");
  CHECK(default_precision_bits() == kDefaultPrecisionBits);
}
