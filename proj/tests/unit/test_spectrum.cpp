#include <doctest.h>

#include <random>

#include "hw/parallel.hpp"
#include "hw/spectrum.hpp"
#include "oracles.hpp"

using namespace hw;

namespace {
ManifoldConfig cfg(int l, IrrationalParameter th = IrrationalParameter::sqrt2()) {
  ManifoldConfig c;
  c.l = l;
  c.theta = std::move(th);
  return c;
}
}  // namespace

TEST_CASE("composition counts match exhaustive enumeration") {
  CHECK(composition_count(1, 1) == 1);
  CHECK(composition_count(4, 2) == 2);
  CHECK(composition_count(7, 3) == 6);
  CHECK(composition_count(2, 1) == 0);
  CHECK(composition_count(1, 3) == 0);
  for (int l = 1; l <= 3; ++l)
    for (int k = 0; k <= 25; ++k) CHECK(composition_count(k, l) == static_cast<std::uint64_t>(oracle::compositions(k, l)));
}

TEST_CASE("sums of squares histogram") {
  const auto r2 = r2l_shell_histogram(1, 30);
  for (int n = 0; n <= 30; ++n) CHECK(r2[static_cast<std::size_t>(n)] == oracle::r_squares(2, n));
  CHECK(r2[5] == 8);
  const auto r4 = r2l_shell_histogram(2, 20);
  for (int n = 0; n <= 20; ++n) CHECK(r4[static_cast<std::size_t>(n)] == oracle::r_squares(4, n));
  const auto r6 = r2l_shell_chunk(3, 5, 12);
  for (int n = 5; n < 12; ++n) CHECK(r6[static_cast<std::size_t>(n - 5)] == oracle::r_squares(6, n));
  CHECK(r2l_shell_histogram(2, 0) == std::vector<std::int64_t>{1});
  CHECK_THROWS_AS(r2l_shell_histogram(3, 1000, 100), BudgetError);
}

TEST_CASE("lowest eigenvalues for sqrt2") {
  const auto c = cfg(1);
  auto lines = enumerate_spectrum(c, 10);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].lambda == 0);
  CHECK(lines[0].multiplicity == 1);
  lines = enumerate_spectrum(c, 16);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].source == LineSource::type_ii);
  CHECK(lines[1].multiplicity == 2);
  CHECK(lines[1].lambda_lo <= 2 * M_PI * (M_SQRT2 + 1));
  CHECK(lines[1].lambda_hi >= 2 * M_PI * (M_SQRT2 + 1));
  lines = enumerate_spectrum(c, 40);
  CHECK(lines.back().source == LineSource::type_i);
  CHECK(lines.back().n == 1);
  CHECK(lines.back().multiplicity == 4);
  CHECK(count_N(c, 10).N == 1);
  CHECK(count_N(c, 16).N == 3);
  CHECK_THROWS_AS(count_N(c, 0), DomainError);
}

TEST_CASE("Weyl main term uses the unit-ball volume") {
  for (int l : {1, 2, 3}) {
    const auto c = cfg(l);
    CHECK(static_cast<double>(c.weyl_coefficient()) ==
          doctest::Approx(static_cast<double>(oracle::weyl_coefficient(l, oracle::kSqrt2))).epsilon(1e-15));
  }
  // frozen from the mpmath derivation script
  CHECK(static_cast<double>(cfg(1).weyl_coefficient()) == doctest::Approx(0.03559438056568511071).epsilon(1e-15));
  const CountingPoint p = count_N(cfg(1), 100);
  CHECK(static_cast<double>(p.main) == doctest::Approx(0.03559438056568511 * 1000.0).epsilon(1e-14));
  CHECK(static_cast<double>(p.R) == doctest::Approx(static_cast<double>(p.N - p.main)));
}

TEST_CASE("counting function agrees with a brute-force spectrum") {
  std::mt19937_64 rng(7);
  for (int l : {1, 2}) {
    for (const auto& th : {IrrationalParameter::sqrt2(), IrrationalParameter::golden()}) {
      const auto c = cfg(l, th);
      const auto brute = oracle::spectrum(l, th.approx_ld(), 1e4L);
      const SpectrumCounter counter(c, 1e4);
      std::uniform_real_distribution<double> ut(0.5, 1e4);
      for (int i = 0; i < 1000; ++i) {
        const double t = ut(rng);
        const CountingPoint p = counter.count(t);
        if (!p.boundary) CHECK(p.N == oracle::count(brute, t));
      }
    }
  }
}

TEST_CASE("enumerated lines are the brute-force spectrum with multiplicity") {
  for (int l : {1, 2, 3}) {
    const auto c = cfg(l);
    const auto lines = enumerate_spectrum(c, 3000);
    const auto brute = oracle::spectrum(l, oracle::kSqrt2, 3000);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      total += lines[i].multiplicity;
      CHECK(lines[i].lambda_lo <= lines[i].lambda_hi);
      if (i) CHECK(compare_lines(c, lines[i - 1], lines[i]) < 0);
    }
    CHECK(total == oracle::count(brute, 3000));
  }
}

TEST_CASE("spectrum stream does not depend on the worker count") {
  const auto c = cfg(2);
  set_worker_count(1);
  const auto a = enumerate_spectrum(c, 5e3);
  set_worker_count(4);
  const auto b = enumerate_spectrum(c, 5e3);
  set_worker_count(1);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lambda_lo == b[i].lambda_lo);
    CHECK(a[i].multiplicity == b[i].multiplicity);
  }
}

TEST_CASE("jump table is consistent with the counter") {
  const auto c = cfg(1);
  const JumpTable jt = build_jump_table(c, 2e4);
  const SpectrumCounter counter(c, 2e4);
  REQUIRE(jt.lambda.size() > 100);
  CHECK(jt.lambda[0] == 0);
  for (std::size_t i = 1; i < jt.lambda.size(); i += 97) {
    CHECK(jt.lambda[i] > jt.lambda[i - 1]);
    const double mid = static_cast<double>((jt.lambda[i] + jt.lambda[i - 1]) / 2);
    CHECK(counter.count(mid).N == jt.N_after[i - 1]);
  }
  CHECK_THROWS_AS(counter.count(3e4), NeedsMoreSpectrum);
}
