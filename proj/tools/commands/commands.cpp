#include "commands.hpp"

#include <cmath>

#include "hw/expsum.hpp"
#include "hw/gapcount.hpp"
#include "hw/meansquare.hpp"
#include "hw/parallel.hpp"
#include "hw/psiexpr.hpp"
#include "hw/registry.hpp"

namespace hw::cmd {

using nlohmann::json;

std::string version() { return "0.1.0"; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

double d(long double v) { return static_cast<double>(v); }

json tuple_json(const Tuple4& t) { return json::array({t[0], t[1], t[2], t[3]}); }

double correlation(const std::vector<long double>& a, const std::vector<long double>& b) {
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  CompensatedSum<long double> sa, sb;
  for (std::size_t i = 0; i < n; ++i) {
    sa.add(a[i]);
    sb.add(b[i]);
  }
  const long double ma = sa.value() / n, mb = sb.value() / n;
  CompensatedSum<long double> sab, saa, sbb;
  for (std::size_t i = 0; i < n; ++i) {
    sab.add((a[i] - ma) * (b[i] - mb));
    saa.add((a[i] - ma) * (a[i] - ma));
    sbb.add((b[i] - mb) * (b[i] - mb));
  }
  return d(sab.value() / std::sqrt(saa.value() * sbb.value()));
}

}  // namespace

Artifact spectrum(const RunConfig& rc, double t_max, int precision) {
  if (!(t_max > 0)) throw DomainError("spectrum: tmax must be positive");
  const auto lines = enumerate_spectrum(rc.manifold, t_max);
  CsvTable csv({"lambda_lo", "lambda_hi", "multiplicity", "source", "m", "k", "n"}, precision);
  std::int64_t total = 0;
  for (const auto& ln : lines) {
    csv.add_row({static_cast<long double>(ln.lambda_lo), static_cast<long double>(ln.lambda_hi), ln.multiplicity,
                 std::string(ln.source == LineSource::type_i ? "I" : "II"), ln.m, ln.k, ln.n});
    total += ln.multiplicity;
  }
  return {csv.render(), "csv", {{"lines", lines.size()}, {"total_multiplicity", total}}};
}

Artifact count(const RunConfig& rc, double t) {
  const CountingPoint p = count_N(rc.manifold, t);
  const json j = {{"t", p.t}, {"N", p.N}, {"main", d(p.main)}, {"R", d(p.R)}, {"boundary", p.boundary}};
  return {dump(j), "json", {{"boundary_flags", p.boundary ? 1 : 0}}};
}

Artifact psi_check(const RunConfig& rc, double x_min, double x_max, int samples, int precision) {
  if (!(x_min > 0) || !(x_max > x_min) || samples < 2) throw DomainError("psi-check: need 0 < xmin < xmax, samples >= 2");
  const auto prof = residual_profile(rc.manifold, log_spaced(x_min, x_max, samples));
  CsvTable csv({"x", "R_exact", "psi_sum", "residual"}, precision);
  for (const auto& p : prof.points) csv.add_row({static_cast<long double>(p.x), p.R_exact, p.psi_sum, p.residual});
  json s = {{"samples", samples}, {"boundary_flags", prof.boundary_count}};
  s["slope"] = prof.slope ? json(*prof.slope) : json(nullptr);
  return {csv.render(), "csv", s};
}

Artifact vaaler_check(double H, int grid, int precision) {
  if (!(H >= 1) || grid < 1) throw DomainError("vaaler-check: need H >= 1 and grid >= 1");
  CsvTable csv({"u", "psi", "vaaler", "vaaler_envelope", "fourier", "fourier_bound", "boundary"}, precision);
  std::int64_t v_viol = 0, f_viol = 0, boundary = 0;
  double worst_margin = INFINITY, f_max_ratio = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double u = static_cast<double>(i) / grid;
    const double ps = psi(u);
    const ExpansionReport v = vaaler_psi(u, H);
    const ExpansionReport f = truncated_fourier_psi(u, H);
    const double ve = std::fabs(ps - v.value);
    worst_margin = std::min(worst_margin, v.envelope - ve);
    // one ulp of slack per term of the degree-H sums
    if (ve > v.envelope + 1e-15 * (H + 1)) ++v_viol;
    const double bound = 3 * f.envelope;
    const bool flagged = f.boundary_count > 0;
    boundary += flagged;
    if (!flagged) {
      const double fe = std::fabs(ps - f.value);
      f_max_ratio = std::max(f_max_ratio, fe / f.envelope);
      if (fe > bound) ++f_viol;
    }
    csv.add_row({static_cast<long double>(u), static_cast<long double>(ps), static_cast<long double>(v.value),
                 static_cast<long double>(v.envelope), static_cast<long double>(f.value),
                 static_cast<long double>(bound), std::int64_t{flagged}});
  }
  json s = {{"H", H},
            {"grid", grid},
            {"vaaler_violations", v_viol},
            {"vaaler_worst_margin", worst_margin},
            {"fourier_violations", f_viol},
            {"fourier_max_ratio", f_max_ratio},
            {"boundary_flags", boundary}};
  return {csv.render(), "csv", s};
}

Artifact vdc_check(const RunConfig& rc, double x, std::int64_t h, int j1, int j) {
  const auto& k = frozen_constants().vdc_envelope;
  const TransformReport r = transformed_S(rc.manifold, x, h, j1, j, k);
  const double diff = d(std::abs(r.direct - r.transformed));
  json out = {{"x", x},
              {"h", h},
              {"j1", j1},
              {"j", j},
              {"direct", {d(r.direct.real()), d(r.direct.imag())}},
              {"transformed", {d(r.transformed.real()), d(r.transformed.imag())}},
              {"difference", diff},
              {"envelope", r.envelope},
              {"components", {{"log", r.e_log}, {"length", r.e_length}, {"endpoint", r.e_endpoint}}},
              {"constants", {{"log", k.log_term}, {"length", k.length_term}, {"endpoint", k.endpoint_term}}},
              {"alpha", r.alpha},
              {"beta", r.beta},
              {"r_range", {r.r_lo, r.r_hi}},
              {"m_count", r.m_count},
              {"endpoint_flagged", r.endpoint_flagged},
              {"within_envelope", diff <= r.envelope}};
  return {dump(out), "json", {{"boundary_flags", r.endpoint_flagged ? 1 : 0}, {"ratio", diff / r.envelope}}};
}

std::vector<double> jump_midpoints(const ManifoldConfig& cfg, double T, int samples) {
  if (!(T > 0) || samples < 1) throw DomainError("jump_midpoints: need T > 0, samples >= 1");
  const double two_pi = 2 * M_PI;
  const JumpTable jt = build_jump_table(cfg, two_pi * 2 * T * 1.001);
  std::vector<double> xs;
  for (std::size_t i = 0; i + 1 < jt.lambda.size(); ++i) {
    const double x = d((jt.lambda[i] + jt.lambda[i + 1]) / 2 / static_cast<long double>(two_pi));
    if (x >= T && x <= 2 * T) xs.push_back(x);
  }
  if (xs.size() < static_cast<std::size_t>(samples)) throw DomainError("jump_midpoints: too few jumps in [T, 2T]");
  const std::size_t stride = xs.size() / static_cast<std::size_t>(samples);
  std::vector<double> out;
  for (int i = 0; i < samples; ++i) out.push_back(xs[static_cast<std::size_t>(i) * stride + stride / 2]);
  return out;
}

Artifact r11(const RunConfig& rc, double T, int samples, double relative_floor, int precision) {
  const auto xs = jump_midpoints(rc.manifold, T, samples);
  const R11Series series(rc.manifold, T, {0.0, relative_floor});
  const SpectrumCounter counter(rc.manifold, 2 * M_PI * 2 * T * 1.001);
  CsvTable csv({"x", "r11", "R_exact"}, precision);
  std::vector<long double> a, b;
  std::int64_t boundary = 0;
  for (double x : xs) {
    const CountingPoint p = counter.count(2 * M_PI * x);
    boundary += p.boundary;
    a.push_back(series.evaluate(x));
    b.push_back(p.R);
    csv.add_row({static_cast<long double>(x), a.back(), b.back()});
  }
  json s = {{"T", T},
            {"H", series.H()},
            {"J", series.J()},
            {"terms", series.terms()},
            {"relative_floor", relative_floor},
            {"dropped_abs_bound", series.dropped_abs_bound()},
            {"dropped_sq_bound", series.dropped_sq_bound()},
            {"correlation", correlation(a, b)},
            {"boundary_flags", boundary}};
  return {csv.render(), "csv", s};
}

namespace {
json stats_json(const GapStatistics& st) {
  json j = {{"count", st.count},
            {"bound", st.bound},
            {"ratio", static_cast<double>(st.count) / st.bound},
            {"diagonal_count", st.diagonal_count},
            {"admissible", st.admissible},
            {"examined", st.examined},
            {"unresolved", st.unresolved}};
  j["min_alpha_nonzero"] = st.min_alpha_nonzero ? json(*st.min_alpha_nonzero) : json(nullptr);
  j["min_alpha_witness"] = st.min_alpha_nonzero ? tuple_json(st.min_alpha_witness) : json(nullptr);
  return j;
}
}  // namespace

Artifact alpha_count(const RunConfig& rc, std::int64_t H1, std::int64_t H2, std::int64_t N1, std::int64_t N2,
                     double delta, bool unpruned) {
  const BoxSpec box{H1, H2, N1, N2, delta};
  ScanOptions opt;
  opt.mode = unpruned ? ScanMode::unpruned : ScanMode::pruned;
  opt.budget = rc.tuple_budget;
  json j = {{"box", {{"H1", H1}, {"H2", H2}, {"N1", N1}, {"N2", N2}, {"delta", delta}}},
            {"mode", unpruned ? "unpruned" : "pruned"}};
  json s;
  try {
    const GapStatistics st = count_solutions(rc.manifold.theta, box, opt);
    j["statistics"] = stats_json(st);
    j["partial"] = false;
    s = {{"partial", false}, {"unresolved", st.unresolved}};
  } catch (const PartialResultError& e) {
    j["statistics"] = stats_json(e.partial());
    j["partial"] = true;
    j["message"] = e.what();
    json done = json::array();
    for (const auto& [a, b] : e.completed()) done.push_back({a, b});
    j["completed_sub_boxes"] = done;
    s = {{"partial", true}, {"completed_sub_boxes", e.completed().size()}};
  }
  return {dump(j), "json", s};
}

Artifact meansquare(const RunConfig& rc, double T_min, double T_max, int ladder) {
  const MeanSquareReport r = fit_mean_square(rc.manifold, geometric_ladder(T_min, T_max, ladder));
  json rows = json::array();
  for (std::size_t i = 0; i < r.T.size(); ++i) rows.push_back({{"T", r.T[i]}, {"I", d(r.I[i])}, {"error", d(r.I_error[i])}});
  json j = {{"ladder", rows},
            {"fitted_exponent", r.fitted_exponent},
            {"fitted_constant", r.fitted_constant},
            {"theoretical_exponent", r.theoretical_exponent},
            {"theoretical_constant", d(r.theoretical_constant)},
            {"constant_ratio", r.constant_ratio},
            {"C", d(r.C)},
            {"C_tail_bound", d(r.C_tail_bound)}};
  j["error_exponent"] = r.error_exponent ? json(*r.error_exponent) : json(nullptr);
  return {dump(j), "json", {{"fitted_exponent", r.fitted_exponent}, {"constant_ratio", r.constant_ratio}}};
}

namespace {
json cvalue_json(const CValue& c) {
  return {{"value", d(c.value)},
          {"value_text", format_real(c.value, 19)},
          {"tail_bound", d(c.tail_bound)},
          {"H0", c.H0},
          {"direct_terms", c.direct_terms},
          {"em_order", c.em_order}};
}
}  // namespace

Artifact constant(const RunConfig& rc, double eps) {
  const CReport r = compute_C(rc.manifold, eps);
  const json j = {{"l", rc.manifold.l},
                  {"eps", eps},
                  {"primary", cvalue_json(r.primary)},
                  {"secondary", cvalue_json(r.secondary)},
                  {"relative_disagreement", d(r.relative_disagreement)},
                  {"theoretical_constant", d(theoretical_constant(rc.manifold.l, r.primary.value))}};
  return {dump(j), "json", {{"relative_disagreement", d(r.relative_disagreement)}}};
}

Artifact theorem2(double h11, double h12, double h22, double g3, bool rational, double eps) {
  const Theorem2Map m = theorem2_map({h11, h12, h22, g3, rational});
  json j = {{"det", m.det},
            {"d", m.d},
            {"d2", m.d2},
            {"theta", m.theta_decimal},
            {"constant_scale", m.constant_scale},
            {"rational", rational},
            {"remark", m.remark}};
  if (m.manifold) {
    const CReport c = compute_C(*m.manifold, eps);
    j["C"] = d(c.primary.value);
    j["C_tail_bound"] = d(c.primary.tail_bound);
    j["constant"] = d(theorem2_constant(m, c.primary.value));
  }
  return {dump(j), "json", json::object()};
}

json manifest(const std::string& subcommand, const json& args, const std::string& config_json, const Artifact& a,
              double wall_seconds, std::uint64_t seed) {
  const auto& fc = frozen_constants();
  return {{"tool", "hwweyl"},
          {"version", version()},
          {"subcommand", subcommand},
          {"args", args},
          {"config_hash", fnv1a_hex(config_json)},
          {"artifact_hash", fnv1a_hex(a.body)},
          {"format", a.format},
          {"seed", seed},
          {"workers", worker_count()},
          {"precision_bits", default_precision_bits()},
          {"wall_seconds", wall_seconds},
          {"summary", a.summary},
          {"frozen_constants",
           {{"version", fc.version},
            {"hash", fnv1a_hex(fc.json)},
            {"vdc_envelope",
             {{"log", fc.vdc_envelope.log_term},
              {"length", fc.vdc_envelope.length_term},
              {"endpoint", fc.vdc_envelope.endpoint_term}}},
            {"gap_count_c", fc.gap_count_c}}}};
}

}  // namespace hw::cmd
