#include <doctest.h>

#include <cmath>

#include "hw/gapcount.hpp"
#include "hw/parallel.hpp"
#include "oracles.hpp"

using namespace hw;

TEST_CASE("alpha reference value and sign") {
  const auto th = IrrationalParameter::sqrt2();
  const AlphaValue a = alpha(th, 1, 1, 2, 3);
  // frozen from the mpmath derivation script
  CHECK(static_cast<double>(a.value) == doctest::Approx(-0.53340687058453119651).epsilon(1e-15));
  CHECK(a.sign == -1);
  CHECK_FALSE(a.exact_zero);
  const AlphaValue z = alpha(th, 3, 3, 9, 9);
  CHECK(z.exact_zero);
  CHECK(z.value == 0);
  CHECK_THROWS_AS(alpha(th, 2, 1, 2, 3), DomainError);  // 2 < 2√2
}

TEST_CASE("alpha vanishes only on the diagonal for sqrt2") {
  const auto th = IrrationalParameter::sqrt2();
  int near_zero = 0;
  for (std::int64_t h1 = 1; h1 <= 40; ++h1)
    for (std::int64_t h2 = 1; h2 <= 40; ++h2)
      for (std::int64_t n1 = static_cast<std::int64_t>(M_SQRT2 * h1) + 1; n1 <= 40; ++n1)
        for (std::int64_t n2 = static_cast<std::int64_t>(M_SQRT2 * h2) + 1; n2 <= 40; ++n2) {
          if (h1 == h2 && n1 == n2) continue;
          const long double v = oracle::alpha(oracle::kSqrt2, h1, h2, n1, n2);
          if (std::fabs(v) > 1e-6L) continue;
          ++near_zero;
          const AlphaValue a = alpha(th, h1, h2, n1, n2);
          CHECK_FALSE(a.exact_zero);
          CHECK(a.sign != 0);
        }
  CHECK(near_zero == 0);  // the closest off-diagonal gaps are far above 1e-6 at this size
}

TEST_CASE("counts agree with a brute-force scan") {
  for (const auto& th : {IrrationalParameter::sqrt2(), IrrationalParameter::golden()}) {
    for (const auto& b : {BoxSpec{2, 2, 4, 4, 0.2}, BoxSpec{4, 4, 8, 8, 0.05}, BoxSpec{2, 4, 8, 16, 0.1},
                          BoxSpec{4, 2, 16, 8, 0.3}}) {
      const GapStatistics st = count_solutions(th, b);
      CHECK(st.count == oracle::gap_count(th.approx_ld(), b.H1, b.H2, b.N1, b.N2, b.delta));
      CHECK(st.count <= st.admissible);
      CHECK(st.unresolved == 0);
    }
  }
}

TEST_CASE("example box against the bound") {
  const GapStatistics st = count_solutions(IrrationalParameter::sqrt2(), {4, 4, 8, 8, 0.05});
  const double p = 4.0 * 4 * 8 * 8;
  CHECK(st.bound == doctest::Approx(0.05 * std::pow(p, 0.75) + std::sqrt(p) * std::log(p) * std::log(p)));
  CHECK(st.count <= st.bound);
  CHECK(st.min_alpha_nonzero.has_value());
}

TEST_CASE("pruned and unpruned scans agree") {
  ScanOptions u;
  u.mode = ScanMode::unpruned;
  for (const auto& th : {IrrationalParameter::sqrt2(), IrrationalParameter::golden()})
    for (double delta : {0.001, 0.05, 0.5, 3.0}) {
      const BoxSpec b{8, 4, 16, 32, delta};
      CHECK(count_solutions(th, b).count == count_solutions(th, b, u).count);
    }
}

TEST_CASE("swap symmetry and monotonicity in delta") {
  const auto th = IrrationalParameter::sqrt2();
  std::int64_t prev = 0;
  for (double delta : {0.001, 0.01, 0.05, 0.1, 0.5, 1.0}) {
    const auto a = count_solutions(th, {4, 8, 16, 16, delta});
    const auto b = count_solutions(th, {8, 4, 16, 16, delta});
    CHECK(a.count == b.count);
    CHECK(a.count >= prev);
    prev = a.count;
  }
}

TEST_CASE("delta extremes") {
  const auto th = IrrationalParameter::sqrt2();
  const auto wide = count_solutions(th, {4, 4, 8, 8, 0.05});
  REQUIRE(wide.min_alpha_nonzero.has_value());
  const auto tiny = count_solutions(th, {4, 4, 8, 8, *wide.min_alpha_nonzero / 2});
  CHECK(tiny.count == tiny.diagonal_count);
  CHECK_FALSE(tiny.min_alpha_nonzero.has_value());
  // Δ above every |α| in the box: all admissible tuples count
  const auto all = count_solutions(th, {4, 4, 8, 8, 10.0});
  CHECK(all.count == all.admissible);
}

TEST_CASE("budget exhaustion reports completed sub-boxes") {
  ScanOptions o;
  o.budget = 50;
  try {
    count_solutions(IrrationalParameter::sqrt2(), {4, 4, 8, 8, 0.05}, o);
    FAIL("expected a partial result");
  } catch (const PartialResultError& e) {
    CHECK_FALSE(e.completed().empty());
    CHECK(e.completed().size() < 16);
    CHECK(e.partial().count >= static_cast<std::int64_t>(e.completed().size()) / 4);
  }
  CHECK_THROWS_AS(count_solutions(IrrationalParameter::sqrt2(), {1, 4, 8, 8, 0.05}), DomainError);
}

TEST_CASE("counts are independent of the worker count") {
  const BoxSpec b{8, 8, 32, 32, 0.1};
  set_worker_count(1);
  const auto a = count_solutions(IrrationalParameter::golden(), b);
  set_worker_count(4);
  const auto c = count_solutions(IrrationalParameter::golden(), b);
  set_worker_count(1);
  CHECK(a.count == c.count);
  CHECK(a.min_alpha_witness == c.min_alpha_witness);
}

TEST_CASE("gap lower bounds over small ranges") {
  const Lemma46Report r = check_lemma46(IrrationalParameter::sqrt2(), 1.0, 0.0, 16, 64);
  REQUIRE(r.equal_h_min.has_value());
  REQUIRE(r.distinct_h_min.has_value());
  CHECK(*r.equal_h_min > 0);
  CHECK(*r.distinct_h_min > 0);
  CHECK(r.equal_h_witness[0] == r.equal_h_witness[1]);
  CHECK(r.distinct_h_witness[0] != r.distinct_h_witness[1]);
  CHECK(r.excluded > 0);
  CHECK(r.shells.size() == 4);
  CHECK(r.equal_h_trend >= kLemma46TrendFloor);
  // with |h1² - h2²| in the normalization the minima stay flat
  CHECK(r.distinct_h_sharp_trend >= kLemma46TrendFloor);
  CHECK(r.sharp_holds);

  // recompute the equal-h minimum independently
  double best = 1e300;
  for (std::int64_t h = 1; h <= 16; ++h)
    for (std::int64_t n1 = 1; n1 <= 64; ++n1)
      for (std::int64_t n2 = 1; n2 <= 64; ++n2) {
        if (n1 == n2 || n1 <= M_SQRT2 * h || n2 <= M_SQRT2 * h) continue;
        const long double a = std::fabs(oracle::alpha(oracle::kSqrt2, h, h, n1, n2));
        const long double beta = h * (2 * n1 - oracle::kSqrt2 * h) * h * (2 * n2 - oracle::kSqrt2 * h);
        if (!(a < std::pow(beta, 0.25L) / 10)) continue;
        best = std::min(best, static_cast<double>(a * std::pow(static_cast<long double>(n1 * n2), 0.25L) / std::sqrt(static_cast<long double>(h))));
      }
  CHECK(*r.equal_h_min == doctest::Approx(best).epsilon(1e-12));
}
