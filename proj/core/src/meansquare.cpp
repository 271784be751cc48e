#include "hw/meansquare.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <quadmath.h>

#include "hw/parallel.hpp"

namespace hw {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

__float128 to_quad(const BigFloat& v) {
  const long double hi = v.to_long_double();
  BigFloat rest(v.precision());
  BigFloat h(v.precision());
  mpfr_set_ld(h.get(), hi, MPFR_RNDN);
  mpfr_sub(rest.get(), v.get(), h.get(), MPFR_RNDN);
  return static_cast<__float128>(hi) + static_cast<__float128>(rest.to_long_double());
}

__float128 weyl_coefficient_quad(const ManifoldConfig& cfg) {
  const int bits = 160;
  const int n = cfg.dimension();
  const Enclosure th = cfg.theta.enclose(std::min(bits, [&] {
    if (const auto* lit = std::get_if<DecimalLiteral>(&cfg.theta.repr())) return lit->bits;
    return bits;
  }()));
  BigFloat t(bits), pi(bits), a(bits), g(bits), v(bits);
  mpfr_add(t.get(), th.lo().get(), th.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  // vol(B_n) = π^(n/2) / Γ(n/2 + 1)
  mpfr_set_d(a.get(), n / 2.0, MPFR_RNDN);
  mpfr_pow(v.get(), pi.get(), a.get(), MPFR_RNDN);
  mpfr_add_ui(a.get(), a.get(), 1, MPFR_RNDN);
  mpfr_gamma(g.get(), a.get(), MPFR_RNDN);
  mpfr_div(v.get(), v.get(), g.get(), MPFR_RNDN);
  // √(2π/θ)
  mpfr_mul_2ui(a.get(), pi.get(), 1, MPFR_RNDN);
  mpfr_div(g.get(), a.get(), t.get(), MPFR_RNDN);
  mpfr_sqrt(g.get(), g.get(), MPFR_RNDN);
  mpfr_mul(v.get(), v.get(), g.get(), MPFR_RNDN);
  // (2π)^n
  mpfr_pow_ui(g.get(), a.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  mpfr_div(v.get(), v.get(), g.get(), MPFR_RNDN);
  return to_quad(v);
}

struct SegmentTerms {
  __float128 value;
  __float128 magnitude;
};

// ∫_{t0}^{t1} (N - A t^(l+1/2))² dt
SegmentTerms segment(__float128 N, __float128 A, int l, __float128 t0, __float128 t1) {
  const __float128 q = l + 1.5Q;
  const auto s = static_cast<__float128>(2 * l + 2);
  const __float128 pq1 = powq(t1, l + 1) * sqrtq(t1);
  const __float128 pq0 = powq(t0, l + 1) * sqrtq(t0);
  const __float128 ps1 = powq(t1, 2 * l + 2);
  const __float128 ps0 = powq(t0, 2 * l + 2);
  SegmentTerms out;
  const __float128 a = N * N * (t1 - t0);
  const __float128 b = 2 * A * N * (pq1 - pq0) / q;
  const __float128 c = A * A * (ps1 - ps0) / s;
  out.value = a - b + c;
  out.magnitude = fabsq(a) + fabsq(b) + fabsq(c) + N * N * t1 + 2 * A * N * pq1 / q + A * A * ps1 / s;
  return out;
}

long double factorial(int n) {
  long double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

long double binom_ld(int n, int k) {
  long double c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Σ_{h > H} h^-2, asymptotic expansion of the trigamma function at H + 1.
long double trigamma_tail(std::int64_t H) {
  if (H < 20) {
    long double s = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L;
    for (std::int64_t h = 1; h <= H; ++h) s -= 1.0L / (static_cast<long double>(h) * h);
    return s;
  }
  const long double z = H + 1.0L;
  const long double z2 = z * z;
  return 1.0L / z + 1.0L / (2.0L * z2) + 1.0L / (6.0L * z2 * z) - 1.0L / (30.0L * z2 * z2 * z) +
         1.0L / (42.0L * z2 * z2 * z2 * z) - 1.0L / (30.0L * z2 * z2 * z2 * z2 * z);
}

// B(3/2, 2l-1)
long double beta_cl(int l) {
  return std::tgamma(1.5L) * std::tgamma(2.0L * l - 1.0L) / std::tgamma(2.0L * l + 0.5L);
}

}  // namespace

// ---------------------------------------------------------------------------

MeanSquareIntegrator::MeanSquareIntegrator(const ManifoldConfig& cfg, JumpTable jumps)
    : cfg_(cfg), jumps_(std::move(jumps)), A_(weyl_coefficient_quad(cfg)) {
  if (jumps_.lambda.empty()) throw DomainError("MeanSquareIntegrator: empty jump table");
}

MeanSquareIntegrator::MeanSquareIntegrator(const ManifoldConfig& cfg, double t_max)
    : MeanSquareIntegrator(cfg, build_jump_table(cfg, t_max)) {}

std::vector<IntegralValue> MeanSquareIntegrator::ladder(const std::vector<double>& Ts) const {
  std::vector<IntegralValue> out;
  if (Ts.empty()) return out;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    if (!(Ts[i] > 1.0)) throw DomainError("integrate_R_squared: T must exceed 1");
    if (i > 0 && Ts[i] < Ts[i - 1]) throw DomainError("integrate_R_squared: ladder must be sorted");
  }
  if (Ts.back() > jumps_.t_max) throw NeedsMoreSpectrum("integrate_R_squared: T beyond the enumerated spectrum");

  const auto& lam = jumps_.lambda;
  const auto& Nv = jumps_.N_after;
  const int l = cfg_.l;
  const __float128 A = A_;
  // first jump index with λ > 1
  std::size_t i = static_cast<std::size_t>(std::upper_bound(lam.begin(), lam.end(), 1.0L) - lam.begin());
  __float128 t = 1;
  __float128 N = Nv[i - 1];
  __float128 acc = 0, mag = 0, pos = 0;
  const __float128 rel_pos = 0x1p-56Q;
  for (double T : Ts) {
    const __float128 Tq = T;
    while (i < lam.size() && static_cast<__float128>(lam[i]) <= Tq) {
      const __float128 t1 = lam[i];
      const SegmentTerms s = segment(N, A, l, t, t1);
      acc += s.value;
      mag += s.magnitude;
      const __float128 w = A * powq(t1, l) * sqrtq(t1);
      const __float128 Nn = Nv[i];
      pos += t1 * rel_pos * fabsq((N - w) * (N - w) - (Nn - w) * (Nn - w));
      N = Nn;
      t = t1;
      ++i;
    }
    const SegmentTerms s = segment(N, A, l, t, Tq);
    IntegralValue v;
    v.value = static_cast<long double>(acc + s.value);
    v.error_bound = static_cast<long double>((mag + s.magnitude) * 0x1p-108Q + pos);
    out.push_back(v);
  }
  return out;
}

IntegralValue MeanSquareIntegrator::integral(double a, double b) const {
  if (!(b >= a)) throw DomainError("integral: need a <= b");
  if (a == b) return {};
  if (a == 1.0) return ladder({b}).front();
  if (a < 1.0) throw DomainError("integral: lower limit must be >= 1");
  const auto v = ladder({a, b});
  return {v[1].value - v[0].value, v[1].error_bound + v[0].error_bound};
}

IntegralValue integrate_R_squared(const ManifoldConfig& cfg, double T) {
  if (!(T > 1.0)) throw DomainError("integrate_R_squared: T must exceed 1");
  return MeanSquareIntegrator(cfg, T).ladder({T}).front();
}

// ---------------------------------------------------------------------------

CValue compute_C_schedule(const ManifoldConfig& cfg, std::int64_t H0, int K, int p) {
  cfg.validate();
  if (H0 < 20 || K < 1 || (p != 4 && p != 6 && p != 8)) throw DomainError("compute_C_schedule: bad schedule");
  const long double th = cfg.theta.approx_ld();
  const int e = 2 * cfg.l - 2;
  static constexpr long double kBernoulli[] = {1.0L / 6.0L, -1.0L / 30.0L, 1.0L / 42.0L, -1.0L / 30.0L};
  const long double zeta_p = p == 4 ? std::pow(kPi, 4) / 90.0L
                             : p == 6 ? std::pow(kPi, 6) / 945.0L
                                      : std::pow(kPi, 8) / 9450.0L;

  struct Part {
    CompensatedSum<long double> value;
    long double bound = 0.0L;
  };
  const auto blocks = split_range(1, H0, 256);
  auto parts = parallel_blocks<Part>(blocks.size(), [&](std::size_t bi) {
    Part part;
    std::vector<long double> c(static_cast<std::size_t>(e + 1)), q(static_cast<std::size_t>(e + 1));
    for (std::int64_t h = blocks[bi].lo; h <= blocks[bi].hi; ++h) {
      const long double a = th * h;
      for (int k = 0; k <= e; ++k) {
        c[static_cast<std::size_t>(k)] = binom_ld(e, k) * std::pow(-a, k);
        q[static_cast<std::size_t>(k)] = 2.5L + k;
      }
      // d-th derivative of f(n) = Σ c_k n^-q_k
      auto fd = [&](long double n, int d) {
        long double s = 0.0L;
        for (int k = 0; k <= e; ++k) {
          long double coef = c[static_cast<std::size_t>(k)];
          const long double qk = q[static_cast<std::size_t>(k)];
          for (int i = 0; i < d; ++i) coef *= -(qk + i);
          s += coef * std::pow(n, -qk - d);
        }
        return s;
      };
      const long double n0 = 2.0L * (std::floor(a) + 1.0L) - a;
      CompensatedSum<long double> row;
      for (int i = 0; i < K; ++i) {
        const long double n = n0 + 2.0L * i;
        row.add(std::pow(1.0L - a / n, e) * std::pow(n, -2.5L));
      }
      const long double nK = n0 + 2.0L * K;
      // ∫_K^∞ g(i) di = (1/2) ∫_{nK}^∞ f(n) dn
      long double integral = 0.0L;
      for (int k = 0; k <= e; ++k) {
        const long double qk = q[static_cast<std::size_t>(k)];
        integral += c[static_cast<std::size_t>(k)] * std::pow(nK, 1.0L - qk) / (qk - 1.0L);
      }
      row.add(0.5L * integral);
      row.add(0.5L * fd(nK, 0));
      long double fact = 1.0L;
      for (int j = 1; 2 * j <= p; ++j) {
        fact *= (2.0L * j - 1.0L) * (2.0L * j);
        // g^(2j-1)(K) = 2^(2j-1) f^(2j-1)(nK)
        row.add(-kBernoulli[j - 1] / fact * std::ldexp(fd(nK, 2 * j - 1), 2 * j - 1));
      }
      // |R_p| <= 2ζ(p)/(2π)^p ∫_K^∞ |g^(p)|,  ∫|g^(p)| <= Σ|c_k| 2^(p-1) (q_k)_(p-1) nK^(1-q_k-p)
      long double rem = 0.0L;
      for (int k = 0; k <= e; ++k) {
        const long double qk = q[static_cast<std::size_t>(k)];
        long double poch = 1.0L;
        for (int i = 0; i < p - 1; ++i) poch *= qk + i;
        rem += std::fabs(c[static_cast<std::size_t>(k)]) * std::ldexp(poch, p - 1) * std::pow(nK, 1.0L - qk - p);
      }
      rem *= 2.0L * zeta_p / std::pow(2.0L * kPi, p);
      const long double w = 1.0L / std::sqrt(static_cast<long double>(h));
      part.value.add(row.value() * w);
      part.bound += rem * w + std::fabs(row.value() * w) * 0x1p-60L * (K + 8);
    }
    return part;
  });
  CompensatedSum<long double> total;
  long double bound = 0.0L;
  for (const auto& p2 : parts) {
    total.add(p2.value);
    bound += p2.bound;
  }
  // h > H0:  h^(-1/2) S_h = (c_l/2) θ^(-3/2) h^-2 + E_h,  |E_h| <= κ (θh)^(-5/2) h^(-1/2)
  const long double cl = beta_cl(cfg.l);
  total.add(0.5L * cl * std::pow(th, -1.5L) * trigamma_tail(H0));
  const long double kappa = cfg.l == 1 ? 1.0L : 2.0L;
  bound += kappa * std::pow(th, -2.5L) / (2.0L * static_cast<long double>(H0) * H0);
  CValue out;
  out.value = total.value();
  out.tail_bound = bound + std::fabs(out.value) * 0x1p-58L;
  out.H0 = H0;
  out.direct_terms = K;
  out.em_order = p;
  return out;
}

CReport compute_C(const ManifoldConfig& cfg, double target_eps) {
  if (!(target_eps > 0.0)) throw DomainError("compute_C: target_eps must be positive");
  const long double th = cfg.theta.approx_ld();
  const long double kappa = cfg.l == 1 ? 1.0L : 2.0L;
  // h-tail remainder <= eps/2
  auto H0 = static_cast<std::int64_t>(std::ceil(std::sqrt(kappa * std::pow(th, -2.5L) / target_eps)));
  H0 = std::max<std::int64_t>(H0, 100);
  CReport rep;
  for (int attempt = 0; attempt < 8; ++attempt) {
    rep.primary = compute_C_schedule(cfg, H0, 16, 6);
    if (rep.primary.tail_bound <= target_eps) break;
    H0 = H0 * 3 / 2;
  }
  if (rep.primary.tail_bound > target_eps) throw BudgetError("compute_C: target_eps not reached");
  rep.secondary = compute_C_schedule(cfg, H0 * 2, 40, 4);
  rep.relative_disagreement = std::fabs(rep.primary.value - rep.secondary.value) / rep.primary.value;
  return rep;
}

long double c_tail_bound(const ManifoldConfig& cfg, std::int64_t H, int J) {
  if (H < 1 || J < 0 || J > 30) throw DomainError("c_tail_bound: bad truncation");
  const long double th = cfg.theta.approx_ld();
  const long double cap_factor = std::ldexp(1.0L, 2 * J + 1) + 0.5L;
  // r beyond the cap, h <= H: n > θh 2^(2J+2), f(n) <= n^(-5/2)
  long double r_tail = 0.0L;
  for (std::int64_t h = 1; h <= H; ++h) {
    const long double a = th * h;
    const long double nc = 2.0L * (std::floor(a * cap_factor) + 1.0L) - a;
    r_tail += (std::pow(nc, -2.5L) + std::pow(nc, -1.5L) / 3.0L) / std::sqrt(static_cast<long double>(h));
  }
  const long double kappa = cfg.l == 1 ? 1.0L : 2.0L;
  const long double h_tail = 0.5L * beta_cl(cfg.l) * std::pow(th, -1.5L) * trigamma_tail(H) +
                             kappa * std::pow(th, -2.5L) / (2.0L * static_cast<long double>(H) * H);
  return r_tail + h_tail;
}

long double theoretical_constant(int l, long double C) {
  if (l < 1) throw DomainError("theoretical_constant: l must be >= 1");
  if (!(C > 0)) throw DomainError("theoretical_constant: C must be positive");
  const long double f = factorial(l - 1);
  return std::pow(2.0L, 4.5L - 4.0L * l) * C / ((4.0L * l + 1.0L) * f * f * std::pow(kPi, 2.0L * l + 1.5L));
}

double error_exponent(double gamma) {
  if (!(gamma >= 1.0)) throw DomainError("error_exponent: γ must be >= 1");
  return (4.0 * gamma + 1.0) / (8.0 * gamma + 4.0);
}

PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("fit_power_law: need >= 2 paired points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0)) throw DomainError("fit_power_law: values must be positive");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  PowerFit f;
  f.exponent = sxy / sxx;
  f.constant = std::exp(my - f.exponent * mx);
  return f;
}

std::vector<double> geometric_ladder(double a, double b, int n) {
  if (n < 2 || !(a > 0) || !(b > a)) throw DomainError("geometric_ladder: need n >= 2 and 0 < a < b");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double r = std::log(b / a) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a * std::exp(r * i);
  out.front() = a;
  out.back() = b;
  return out;
}

MeanSquareReport fit_mean_square(const ManifoldConfig& cfg, const std::vector<double>& ladder, double c_eps) {
  if (ladder.size() < 5) throw DomainError("fit_mean_square: ladder needs at least 5 points");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (!(ladder[i] > ladder[i - 1])) throw DomainError("fit_mean_square: ladder must increase");
  }
  const double ratio0 = ladder[1] / ladder[0];
  for (std::size_t i = 2; i < ladder.size(); ++i) {
    if (std::fabs(ladder[i] / ladder[i - 1] / ratio0 - 1.0) > 1e-9) {
      throw DomainError("fit_mean_square: ladder must be geometric");
    }
  }
  MeanSquareReport rep;
  rep.T = ladder;
  const MeanSquareIntegrator integ(cfg, ladder.back());
  for (const auto& v : integ.ladder(ladder)) {
    rep.I.push_back(v.value);
    rep.I_error.push_back(v.error_bound);
  }
  std::vector<double> xs(ladder.begin() + 1, ladder.end());
  std::vector<double> ys;
  for (std::size_t i = 1; i < rep.I.size(); ++i) ys.push_back(static_cast<double>(rep.I[i]));
  rep.fitted_exponent = fit_power_law(xs, ys).exponent;
  rep.theoretical_exponent = 2.0 * cfg.l + 0.5;
  rep.fitted_constant = static_cast<double>(rep.I.back()) / std::pow(ladder.back(), rep.theoretical_exponent);
  const CReport c = compute_C(cfg, c_eps);
  rep.C = c.primary.value;
  rep.C_tail_bound = c.primary.tail_bound;
  rep.theoretical_constant = theoretical_constant(cfg.l, rep.C);
  if (auto g = cfg.theta.declared_type()) rep.error_exponent = error_exponent(*g);
  rep.constant_ratio = rep.fitted_constant / static_cast<double>(rep.theoretical_constant);
  return rep;
}

// ---------------------------------------------------------------------------

Theorem2Map theorem2_map(const Theorem2Config& c) {
  if (!(c.h11 > 0) || !(c.h22 > 0)) throw DomainError("theorem2: h must be positive definite");
  const double det = c.h11 * c.h22 - c.h12 * c.h12;
  if (!(det > 0)) throw DomainError("theorem2: h11 h22 - h12² must be positive");
  if (!(c.g3 > 0)) throw DomainError("theorem2: g3 must be positive");
  Theorem2Map m;
  m.det = det;
  // h^-1 J has eigenvalues ±i/√det, so d² = 1/√det.
  m.d2 = 1.0 / std::sqrt(det);
  m.d = std::sqrt(m.d2);
  m.constant_scale = 1.0 / (m.d * m.d * m.d);

  const int bits = 256;
  BigFloat D(bits), t(bits), pi(bits), tmp(bits);
  mpfr_set_d(D.get(), c.h11, MPFR_RNDN);
  mpfr_mul_d(D.get(), D.get(), c.h22, MPFR_RNDN);
  mpfr_set_d(tmp.get(), c.h12, MPFR_RNDN);
  mpfr_sqr(tmp.get(), tmp.get(), MPFR_RNDN);
  mpfr_sub(D.get(), D.get(), tmp.get(), MPFR_RNDN);
  // θ = 2π/(g3 d²) = 2π √det / g3
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  mpfr_sqrt(t.get(), D.get(), MPFR_RNDN);
  mpfr_mul(t.get(), t.get(), pi.get(), MPFR_RNDN);
  mpfr_mul_2ui(t.get(), t.get(), 1, MPFR_RNDN);
  mpfr_div_d(t.get(), t.get(), c.g3, MPFR_RNDN);
  std::vector<char> buf(128);
  mpfr_snprintf(buf.data(), buf.size(), "%.60Rg", t.get());
  m.theta_decimal = buf.data();

  if (c.theta_rational) {
    m.remark = "rational theta: the mean-square asymptotic does not apply; the remainder is O(T^(9/4+eps))";
    return m;
  }
  ManifoldConfig mc;
  mc.l = 1;
  mc.theta = IrrationalParameter::literal(m.theta_decimal, 192)
                 .with_declared_type(1.0, "declared by caller for the mapped metric");
  m.manifold = mc;
  m.remark = "irrational theta: constant 2^(1/2) C / (5 d^3 pi^(7/2))";
  return m;
}

const ManifoldConfig& require_irrational(const Theorem2Map& map) {
  if (!map.manifold) throw ModeError("theorem2: θ declared rational; irrational pipeline unavailable");
  return *map.manifold;
}

long double theorem2_constant(const Theorem2Map& map, long double C) {
  require_irrational(map);
  return theoretical_constant(1, C) * map.constant_scale;
}

}  // namespace hw
