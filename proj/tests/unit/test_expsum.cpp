#include <doctest.h>

#include <cmath>
#include <complex>

#include "hw/expsum.hpp"
#include "hw/meansquare.hpp"
#include "hw/registry.hpp"
#include "oracles.hpp"

using namespace hw;

namespace {
ManifoldConfig cfg(int l) {
  ManifoldConfig c;
  c.l = l;
  return c;
}
}  // namespace

TEST_CASE("dyadic blocks partition the m range") {
  const auto c = cfg(1);
  const double x = 12345.6;
  const int J = dyadic_cap(x);
  std::int64_t covered = 0;
  std::int64_t next_hi = static_cast<std::int64_t>(std::floor(std::sqrt(x / M_SQRT2)));
  for (int j = 0; j <= 12; ++j) {
    const DyadicBlock b = dyadic_block(c, x, j);
    if (b.m_hi < b.m_lo) continue;
    CHECK(b.m_hi == next_hi);
    next_hi = b.m_lo - 1;
    covered += b.m_hi - b.m_lo + 1;
  }
  CHECK(next_hi == 0);
  CHECK(covered == static_cast<std::int64_t>(std::floor(std::sqrt(x / M_SQRT2))));
  CHECK(J >= 1);
}

TEST_CASE("direct sum matches its definition") {
  const auto c = cfg(2);
  const double x = 5000;
  const DyadicBlock b = dyadic_block(c, x, 1);
  std::complex<long double> s = 0;
  for (std::int64_t m = b.m_lo; m <= b.m_hi; ++m) {
    const long double ph = -3 * (x / (2.0L * m) - oracle::kSqrt2 * m / 2);
    s += std::pow(static_cast<long double>(x), 1) * static_cast<long double>(m) *
         std::polar(1.0L, 2 * oracle::kPi * ph);
  }
  const auto got = direct_S(c, x, 3, 0, 1);
  CHECK(static_cast<double>(std::abs(got - s)) < 1e-9 * static_cast<double>(std::abs(s)) + 1e-9);
}

TEST_CASE("transformed sum stays inside the frozen envelope") {
  const auto& k = frozen_constants().vdc_envelope;
  for (int l : {1, 2}) {
    const auto c = cfg(l);
    for (double x : {3e3, 7e3})
      for (std::int64_t h : {1, 3})
        for (int j : {0, 1})
          for (int j1 = 0; j1 < l; ++j1) {
            const auto r = transformed_S(c, x, h, j1, j, k);
            CHECK(static_cast<double>(std::abs(r.direct - r.transformed)) <= r.envelope);
            CHECK(r.envelope == doctest::Approx(k.log_term * r.e_log + k.length_term * r.e_length +
                                                k.endpoint_term * r.e_endpoint));
          }
  }
}

TEST_CASE("beta endpoints") {
  const Enclosure b = beta_endpoint(IrrationalParameter::sqrt2(), 3, 2, 128);
  // θh(4^j + 1)/2
  CHECK(b.mid_double() == doctest::Approx(static_cast<double>(oracle::kSqrt2 * 3 * 17 / 2)));
}

TEST_CASE("stationary point identity") {
  const auto c = cfg(1);
  for (std::int64_t h : {1, 5, 40})
    for (std::int64_t r : {100, 1000}) CHECK(stationary_phase_defect(c, 12345.0, h, r, 256) < std::ldexp(1.0, -60));
}

TEST_CASE("assembled F is real") {
  const auto F = assemble_F(cfg(1), 2000.5, 30, 0, dyadic_cap(2000.5));
  CHECK(std::fabs(static_cast<double>(F.imag())) < 1e-9);
}

TEST_CASE("Voronoi coefficients") {
  const auto c = cfg(1);
  const long double n = 2 * 3 - oracle::kSqrt2 * 2;
  CHECK(static_cast<double>(voronoi_u(c, 2, 3)) ==
        doctest::Approx(static_cast<double>(std::pow(2.0L, -0.25L) * std::pow(n, -1.25L))));
  CHECK(voronoi_u(c, 1, 2) < 0);  // e(h/2) = -1 for odd h when l = 1
  CHECK_THROWS_AS(voronoi_u(c, 2, 2), DomainError);
}

TEST_CASE("R11 series domain and dropped-term accounting") {
  const auto c = cfg(1);
  const R11Series s(c, 200, {0.0, 1e-3});
  CHECK(s.terms() > 0);
  CHECK(s.dropped_abs_bound() >= 0);
  CHECK(s.dropped_sq_bound() <= s.dropped_abs_bound() * s.floor_abs() + 1e-300);
  CHECK_THROWS_AS(s.evaluate(100), DomainError);
  CHECK_NOTHROW(s.evaluate(300));
}

TEST_CASE("diagonal extraction approaches the series constant") {
  const auto c = cfg(1);
  const long double full = compute_C(c, 1e-8).primary.value;
  const long double d1 = diagonal_constant_extract(c, 100, 10);
  const long double d2 = diagonal_constant_extract(c, 1000, 20);
  CHECK(d1 < d2);
  CHECK(d2 < full);
  CHECK(full - d2 <= c_tail_bound(c, 1000, 20));
  CHECK(full - d1 <= c_tail_bound(c, 100, 10));
}
