#include "suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "hw/expsum.hpp"
#include "hw/gapcount.hpp"
#include "hw/meansquare.hpp"
#include "hw/parallel.hpp"
#include "hw/psiexpr.hpp"
#include "hw/registry.hpp"

namespace hw::cmd {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ManifoldConfig manifold(int l, IrrationalParameter th = IrrationalParameter::sqrt2()) {
  ManifoldConfig c;
  c.l = l;
  c.theta = std::move(th);
  return c;
}

RunConfig run_config(int l, IrrationalParameter th = IrrationalParameter::sqrt2()) {
  RunConfig rc;
  rc.manifold = manifold(l, std::move(th));
  rc.canonical_json = "{\"l\":" + std::to_string(l) + "}";
  return rc;
}

CriterionResult residual(int id, int l, double x_max, double limit) {
  CriterionResult r;
  r.id = id;
  r.name = fmt("psi-expression residual slope, l=%d", l);
  bool ok = true;
  std::string detail;
  std::vector<std::pair<const char*, IrrationalParameter>> thetas = {{"sqrt2", IrrationalParameter::sqrt2()}};
  if (l == 1) thetas.emplace_back("golden", IrrationalParameter::golden());
  for (auto& [name, th] : thetas) {
    const auto prof = residual_profile(manifold(l, th), log_spaced(1e2, x_max, 200));
    const double s = prof.slope.value_or(INFINITY);
    ok = ok && s <= limit;
    detail += fmt("%s slope %.4f (limit %.2f, %lld boundary) ", name, s, limit,
                  static_cast<long long>(prof.boundary_count));
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

MeanSquareReport ladder_report() {
  static const MeanSquareReport rep = fit_mean_square(manifold(1), geometric_ladder(1e3, 1e6, 8));
  return rep;
}

CriterionResult exponent() {
  const auto rep = ladder_report();
  return {3, "mean-square exponent, l=1, T in [1e3, 1e6]", std::fabs(rep.fitted_exponent - 2.5) <= 0.1,
          fmt("fitted %.4f, theory %.1f", rep.fitted_exponent, rep.theoretical_exponent)};
}

CriterionResult constant_ratio() {
  const auto rep = ladder_report();
  return {4, "mean-square constant ratio at T = 1e6", rep.constant_ratio >= 0.4 && rep.constant_ratio <= 2.5,
          fmt("fitted %.6g / theoretical %.6g = %.4f (window [0.4, 2.5])", rep.fitted_constant,
              static_cast<double>(rep.theoretical_constant), rep.constant_ratio)};
}

CriterionResult c_stability() {
  const auto cfg = manifold(1);
  const CReport c = compute_C(cfg, 1e-8);
  const long double diag = diagonal_constant_extract(cfg, 1000, 20);
  const long double tail = c_tail_bound(cfg, 1000, 20);
  const long double gap = c.primary.value - diag;
  const bool schedules = c.relative_disagreement <= 1e-8L;
  const bool extract = gap >= -c.primary.tail_bound && gap <= tail + c.primary.tail_bound;
  return {5, "C(1, sqrt2) stability", schedules && extract,
          fmt("C = %.15Lf, schedules differ by %.2Le rel; C - diag(1e3, 20) = %.4Le, tail bound %.4Le",
              c.primary.value, c.relative_disagreement, gap, tail)};
}

CriterionResult vaaler() {
  std::int64_t v = 0;
  std::string detail;
  for (double H : {10.0, 50.0, 250.0}) {
    const auto a = vaaler_check(H, 10000, 17);
    v += a.summary["vaaler_violations"].get<std::int64_t>();
    detail += fmt("H=%g: %lld violations, worst margin %.3g; ", H,
                  static_cast<long long>(a.summary["vaaler_violations"].get<std::int64_t>()),
                  a.summary["vaaler_worst_margin"].get<double>());
  }
  return {6, "Vaaler majorant", v == 0, detail};
}

CriterionResult fourier() {
  std::int64_t v = 0;
  std::string detail;
  for (double H : {10.0, 50.0, 250.0}) {
    const auto a = vaaler_check(H, 10000, 17);
    v += a.summary["fourier_violations"].get<std::int64_t>();
    detail += fmt("H=%g: %lld violations, max |err|/min(1,1/(H||u||)) %.3f, %lld boundary; ", H,
                  static_cast<long long>(a.summary["fourier_violations"].get<std::int64_t>()),
                  a.summary["fourier_max_ratio"].get<double>(),
                  static_cast<long long>(a.summary["boundary_flags"].get<std::int64_t>()));
  }
  return {7, "truncated Fourier envelope", v == 0, detail};
}

CriterionResult vdc(std::uint64_t seed) {
  const auto& k = frozen_constants().vdc_envelope;
  int viol = 0, total = 0, flagged = 0;
  double worst = 0.0;
  for (int l : {1, 2}) {
    const auto cfg = manifold(l);
    for (std::int64_t h : {1, 2, 4}) {
      for (int j : {0, 1, 2}) {
        for (double x : {1e4, 2e4, 5e4}) {
          for (int j1 = 0; j1 < l; ++j1) {
            const TransformReport t = transformed_S(cfg, x, h, j1, j, k);
            const double ratio = static_cast<double>(std::abs(t.direct - t.transformed)) / t.envelope;
            worst = std::max(worst, ratio);
            viol += ratio > 1.0;
            flagged += t.endpoint_flagged;
            ++total;
          }
        }
      }
    }
  }
  // stationary-phase identity at random (x, h, r)
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(1e3, 1e6);
  std::uniform_int_distribution<int> uh(1, 64);
  double worst_defect = 0.0;
  const auto cfg = manifold(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = ux(rng);
    const std::int64_t h = uh(rng);
    const auto r0 = static_cast<std::int64_t>(std::ceil(M_SQRT2 * h));
    std::uniform_int_distribution<std::int64_t> ur(r0, r0 + 1000);
    worst_defect = std::max(worst_defect, stationary_phase_defect(cfg, x, h, ur(rng), 256));
  }
  const bool ok = viol == 0 && worst_defect <= std::ldexp(1.0, -60);
  return {8, "van der Corput transform envelope", ok,
          fmt("%d/%d grid points outside the frozen envelope (worst ratio %.4f, %d endpoint-flagged); "
              "stationary-phase defect max %.3g over 1000 points",
              viol, total, worst, flagged, worst_defect)};
}

CriterionResult gap_ladder() {
  const double c = frozen_constants().gap_count_c;
  const std::int64_t shapes[4][4] = {{2, 2, 8, 8}, {4, 8, 16, 32}, {8, 8, 32, 32}, {16, 16, 64, 64}};
  bool ok = true;
  double worst = 0.0;
  int compared = 0, mismatches = 0, boxes = 0;
  for (const auto& th : {IrrationalParameter::sqrt2(), IrrationalParameter::golden()}) {
    for (const auto& s : shapes) {
      for (double delta : {0.01, 0.05, 0.2}) {
        const BoxSpec box{s[0], s[1], s[2], s[3], delta};
        const GapStatistics st = count_solutions(th, box);
        ++boxes;
        worst = std::max(worst, static_cast<double>(st.count) / st.bound);
        ok = ok && static_cast<double>(st.count) <= c * st.bound;
        if (st.admissible <= 1'000'000) {
          ScanOptions u;
          u.mode = ScanMode::unpruned;
          ++compared;
          mismatches += count_solutions(th, box, u).count != st.count;
        }
      }
    }
  }
  return {9, "small-gap count against the frozen bound", ok && mismatches == 0,
          fmt("%d boxes, max count/bound %.4f vs frozen c %.3f; pruned vs unpruned mismatches %d of %d", boxes, worst,
              c, mismatches, compared)};
}

CriterionResult gap_lower_bounds() {
  const Lemma46Report r = check_lemma46(IrrationalParameter::sqrt2(), 1.0, 0.01, 16, 64);
  auto w = [](const Tuple4& t) { return fmt("(%lld,%lld,%lld,%lld)", (long long)t[0], (long long)t[1], (long long)t[2], (long long)t[3]); };
  std::string shells;
  for (const auto& s : r.shells)
    shells += fmt(" h<=%lld: %.4f/%.4f/%.4f", (long long)s.h_max, s.equal_h_min.value_or(-1), s.distinct_h_min.value_or(-1),
                  s.distinct_h_sharp_min.value_or(-1));
  return {10, "gap lower bounds, h <= 16, n <= 64", r.holds,
          fmt("equal-h min %.4f at %s trend %.3f; distinct-h min %.4f at %s trend %.3f (floor %.2f); "
              "with |h1^2-h2^2|^(g+e): min %.4f at %s trend %.3f; shells eq/distinct/sharp:",
              r.equal_h_min.value_or(-1), w(r.equal_h_witness).c_str(), r.equal_h_trend, r.distinct_h_min.value_or(-1),
              w(r.distinct_h_witness).c_str(), r.distinct_h_trend, kLemma46TrendFloor, r.distinct_h_sharp_min.value_or(-1),
              w(r.distinct_h_sharp_witness).c_str(), r.distinct_h_sharp_trend) +
              shells};
}

CriterionResult g_bound() {
  const double T = 1e3;
  const long double I = g_integral(manifold(1), T, 2 * T, T * T);
  const double ref = std::pow(T, 1.5) / (T * T) * std::log(T * T);
  const double c = static_cast<double>(I) / ref;
  return {11, "G-integral bound at T = 1e3", c <= 10.0, fmt("integral %.6Lf, T^(3/2) H^-1 log H = %.6f, c = %.3f", I, ref, c)};
}

CriterionResult r11_corr() {
  const auto a = r11(run_config(1), 1e4, 1000, 1e-4, 17);
  const double cor = a.summary["correlation"].get<double>();
  return {12, "R11 series correlation on [1e4, 2e4]", cor >= 0.9,
          fmt("correlation %.4f over 1000 jump midpoints, %lld terms, dropped sum|u| <= %.3g", cor,
              static_cast<long long>(a.summary["terms"].get<std::int64_t>()), a.summary["dropped_abs_bound"].get<double>())};
}

CriterionResult determinism() {
  auto artifacts = [] {
    std::vector<std::string> out;
    const auto r1 = run_config(1), r2 = run_config(2), rg = run_config(1, IrrationalParameter::golden());
    out.push_back(spectrum(r1, 3e3, 17).body);
    out.push_back(spectrum(r2, 1e3, 17).body);
    out.push_back(count(r1, 16).body);
    out.push_back(psi_check(rg, 1e2, 1e4, 40, 17).body);
    out.push_back(vaaler_check(50, 500, 17).body);
    out.push_back(vdc_check(r2, 2e4, 2, 1, 1).body);
    out.push_back(r11(r1, 1e3, 100, 1e-3, 17).body);
    out.push_back(alpha_count(r1, 8, 8, 32, 32, 0.05, false).body);
    out.push_back(meansquare(r1, 1e2, 1e4, 5).body);
    out.push_back(constant(r1, 1e-8).body);
    out.push_back(theorem2(1, 0, 1, 4, false, 1e-8).body);
    return out;
  };
  auto lines = [] {
    std::ostringstream ss;
    for (const auto& ln : enumerate_spectrum(manifold(1), 2e4))
      ss << ln.lambda_lo << ' ' << ln.multiplicity << ' ' << ln.m << ' ' << ln.k << ' ' << ln.n << '\n';
    return ss.str();
  };
  const int saved = worker_count();
  std::vector<std::vector<std::string>> runs;
  std::vector<std::string> streams;
  for (int w : {1, 1, 4, 4, 3}) {
    set_worker_count(w);
    runs.push_back(artifacts());
    streams.push_back(lines());
  }
  set_worker_count(saved);
  int diffs = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    for (std::size_t i = 0; i < runs[0].size(); ++i) diffs += runs[r][i] != runs[0][i];
  int stream_diffs = 0;
  for (const auto& s : streams) stream_diffs += s != streams[0];
  return {13, "byte-identical artifacts across runs and worker counts", diffs == 0 && stream_diffs == 0,
          fmt("%zu artifacts x 5 runs (workers 1,1,4,4,3): %d differences; spectrum stream differences %d",
              runs[0].size(), diffs, stream_diffs)};
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  return fmt("[%s] %2d %s (%.1fs): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.detail;
}

std::vector<CriterionResult> run_primary_suite(const SuiteOptions& opt,
                                               const std::function<void(const CriterionResult&)>& on_result) {
  const std::vector<std::pair<int, std::function<CriterionResult()>>> all = {
      {1, [] { return residual(1, 1, 1e5, 0.60); }},
      {2, [] { return residual(2, 2, 1e4, 1.60); }},
      {3, exponent},
      {4, constant_ratio},
      {5, c_stability},
      {6, vaaler},
      {7, fourier},
      {8, [&] { return vdc(opt.seed); }},
      {9, gap_ladder},
      {10, gap_lower_bounds},
      {11, g_bound},
      {12, r11_corr},
      {13, determinism},
  };
  const int saved = worker_count();
  set_worker_count(opt.workers);
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : all) {
    if (!opt.only.empty() && !opt.only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  set_worker_count(saved);
  return out;
}

}  // namespace hw::cmd
