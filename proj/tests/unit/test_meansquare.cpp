#include <doctest.h>

#include <cmath>

#include "hw/meansquare.hpp"
#include "oracles.hpp"

using namespace hw;

namespace {

// Simpson on every interval between consecutive jumps of the brute spectrum.
long double oracle_integral(int l, long double theta, long double a, long double b) {
  const auto spec = oracle::spectrum(l, theta, b + 1);
  const long double A = oracle::weyl_coefficient(l, theta);
  std::vector<long double> cuts{a};
  for (const auto& e : spec)
    if (e.lambda > a && e.lambda < b) cuts.push_back(e.lambda);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  long double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const long double lo = cuts[i], hi = cuts[i + 1];
    if (hi <= lo) continue;
    const auto n = static_cast<long double>(oracle::count(spec, (lo + hi) / 2));
    total += oracle::simpson([&](long double t) {
      const long double r = n - A * std::pow(t, l + 0.5L);
      return r * r;
    }, lo, hi, 256);
  }
  return total;
}

ManifoldConfig cfg_of(int l, IrrationalParameter th) {
  ManifoldConfig c;
  c.l = l;
  c.theta = std::move(th);
  return c;
}

}  // namespace

TEST_CASE("exact integral matches piecewise quadrature") {
  for (int l : {1, 2}) {
    for (const auto& [th, thv] : {std::pair{IrrationalParameter::sqrt2(), oracle::kSqrt2},
                                 std::pair{IrrationalParameter::golden(), oracle::kGolden}}) {
      const ManifoldConfig cfg = cfg_of(l, th);
      MeanSquareIntegrator integ(cfg, 400.0);
      for (double T : {50.0, 137.5, 400.0}) {
        const IntegralValue v = integ.integral(1.0, T);
        const long double ref = oracle_integral(l, thv, 1, T);
        CHECK(static_cast<double>(v.value) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
        CHECK(v.error_bound >= 0);
      }
      CHECK_THROWS_AS(integ.integral(1.0, 500.0), NeedsMoreSpectrum);
    }
  }
}

TEST_CASE("ladder agrees with one-off integrals") {
  const ManifoldConfig cfg = cfg_of(1, IrrationalParameter::sqrt2());
  MeanSquareIntegrator integ(cfg, 5000.0);
  const std::vector<double> Ts{10, 100, 1000, 5000};
  const auto lad = integ.ladder(Ts);
  REQUIRE(lad.size() == Ts.size());
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    const auto one = integ.integral(1.0, Ts[i]);
    CHECK(static_cast<double>(lad[i].value) == doctest::Approx(static_cast<double>(one.value)).epsilon(1e-12));
  }
  CHECK(static_cast<double>(integrate_R_squared(cfg, 1000).value) ==
        doctest::Approx(static_cast<double>(lad[2].value)).epsilon(1e-12));
}

TEST_CASE("series constant against frozen references") {
  // reference values from the mpmath derivation script
  struct Ref {
    int l;
    IrrationalParameter th;
    double value;
  };
  for (const auto& r : {Ref{1, IrrationalParameter::sqrt2(), 0.28040913499970},
                        Ref{2, IrrationalParameter::sqrt2(), 0.076828549349808},
                        Ref{1, IrrationalParameter::golden(), 0.26337860456793}}) {
    const CReport c = compute_C(cfg_of(r.l, r.th), 1e-10);
    CHECK(static_cast<double>(c.primary.value) == doctest::Approx(r.value).epsilon(1e-10));
    CHECK(static_cast<double>(c.secondary.value) == doctest::Approx(r.value).epsilon(1e-10));
    CHECK(c.relative_disagreement < 1e-10L);
    CHECK(c.primary.tail_bound < 1e-10L);
  }
}

TEST_CASE("schedules converge to the same constant") {
  const ManifoldConfig cfg = cfg_of(1, IrrationalParameter::sqrt2());
  const CValue a = compute_C_schedule(cfg, 2000, 8, 4);
  const CValue b = compute_C_schedule(cfg, 4000, 16, 6);
  CHECK(std::fabs(static_cast<double>(a.value - b.value)) <= static_cast<double>(a.tail_bound + b.tail_bound));
  // the truncated sum sits below 𝒞 by at most the tail bound
  const long double tb = c_tail_bound(cfg, 100, 3);
  CHECK(tb > 0);
  CHECK(c_tail_bound(cfg, 200, 3) < tb);
}

TEST_CASE("theoretical constant and exponent formulas") {
  const long double C = 0.28040913499970L;
  const long double expect = std::pow(2.0L, 0.5L) * C / (5 * std::pow(oracle::kPi, 3.5L));
  CHECK(static_cast<double>(theoretical_constant(1, C)) == doctest::Approx(static_cast<double>(expect)).epsilon(1e-15));
  const long double expect2 = std::pow(2.0L, -3.5L) * C / (9 * std::pow(oracle::kPi, 5.5L));
  CHECK(static_cast<double>(theoretical_constant(2, C)) == doctest::Approx(static_cast<double>(expect2)).epsilon(1e-15));
  CHECK(error_exponent(1.0) == doctest::Approx(5.0 / 12.0));
  CHECK(error_exponent(2.0) == doctest::Approx(9.0 / 20.0));
  CHECK_THROWS_AS(error_exponent(0.5), DomainError);
}

TEST_CASE("power-law fit and ladders") {
  std::vector<double> xs, ys;
  for (double x : geometric_ladder(10, 1e5, 9)) {
    xs.push_back(x);
    ys.push_back(3.5 * std::pow(x, 2.5));
  }
  const PowerFit f = fit_power_law(xs, ys);
  CHECK(f.exponent == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(f.constant == doctest::Approx(3.5).epsilon(1e-10));
  CHECK(xs.front() == 10);
  CHECK(xs.back() == 1e5);
  CHECK(xs[4] == doctest::Approx(std::sqrt(10 * 1e5)));
  CHECK_THROWS_AS(geometric_ladder(10, 5, 4), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0}, {2.0}), DomainError);
  CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {2.0, -1.0}), DomainError);
  const ManifoldConfig cfg = cfg_of(1, IrrationalParameter::sqrt2());
  CHECK_THROWS_AS(fit_mean_square(cfg, {10, 20, 30, 40}), DomainError);
  CHECK_THROWS_AS(fit_mean_square(cfg, {10, 20, 15, 40, 50}), DomainError);
}

TEST_CASE("mean square grows like T^(2l+1/2)") {
  const ManifoldConfig cfg = cfg_of(1, IrrationalParameter::golden());
  const MeanSquareReport r = fit_mean_square(cfg, geometric_ladder(1e3, 1e5, 6));
  CHECK(r.theoretical_exponent == 2.5);
  CHECK(std::fabs(r.fitted_exponent - 2.5) < 0.1);
  CHECK(r.constant_ratio > 0.8);
  CHECK(r.constant_ratio < 1.25);
  REQUIRE(r.error_exponent.has_value());
  CHECK(*r.error_exponent == doctest::Approx(5.0 / 12.0));
}

TEST_CASE("torus metric map") {
  const Theorem2Map id = theorem2_map({1, 0, 1, 1, false});
  CHECK(id.d == doctest::Approx(1.0));
  CHECK(id.constant_scale == doctest::Approx(1.0));
  CHECK(std::stod(id.theta_decimal) == doctest::Approx(2 * M_PI));
  REQUIRE(id.manifold.has_value());
  CHECK(require_irrational(id).l == 1);

  const Theorem2Map four = theorem2_map({4, 0, 4, 1, false});
  CHECK(four.d == doctest::Approx(0.5));
  CHECK(four.constant_scale == doctest::Approx(8.0));
  CHECK(std::stod(four.theta_decimal) == doctest::Approx(8 * M_PI));
  const long double C = 0.3L;
  CHECK(static_cast<double>(theorem2_constant(four, C)) ==
        doctest::Approx(static_cast<double>(8 * theorem2_constant(id, C))).epsilon(1e-12));

  const Theorem2Map rat = theorem2_map({1, 0, 1, 2 * M_PI, true});
  CHECK_FALSE(rat.manifold.has_value());
  CHECK_THROWS_AS(require_irrational(rat), ModeError);
  CHECK_THROWS_AS(theorem2_map({1, 2, 1, 1, false}), DomainError);
  CHECK_THROWS_AS(theorem2_map({1, 0, 1, 0, false}), DomainError);
}
