#include "hw/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hw/parallel.hpp"
#include "hw/psiexpr.hpp"

namespace hw {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

int theta_max_bits(const IrrationalParameter& theta) {
  if (const auto* lit = std::get_if<DecimalLiteral>(&theta.repr())) return lit->bits;
  return kMaxPrecisionBits;
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

// e(t) for long double t, reduced mod 1 first.
std::complex<long double> e_ld(long double t) {
  const long double r = t - std::floor(t + 0.5L);
  const long double a = 2.0L * kPi * r;
  return {std::cos(a), std::sin(a)};
}

struct CertifiedEndpoint {
  std::int64_t floor = 0;
  bool integer_flag = false;  // enclosure straddles an integer
  double value = 0.0;
};

CertifiedEndpoint certify_endpoint(const IrrationalParameter& theta, std::int64_t h, int j) {
  CertifiedEndpoint out;
  const int max_bits = std::min(theta_max_bits(theta), 4096);
  for (int bits = 128;; bits *= 2) {
    const Enclosure e = beta_endpoint(theta, h, j, bits);
    out.value = e.mid_double();
    if (auto f = e.certified_floor()) {
      out.floor = f->get_si();
      out.integer_flag = false;
      return out;
    }
    if (bits * 2 > max_bits) {
      out.floor = static_cast<std::int64_t>(std::llround(out.value));
      out.integer_flag = true;
      return out;
    }
  }
}

}  // namespace

int dyadic_cap(double T) {
  if (!(T > std::exp(1.0))) throw DomainError("dyadic_cap: T must exceed e");
  const double L = std::log(T);
  return std::max(0, static_cast<int>(std::floor((L - std::log(L)) / (2.0 * std::log(2.0)))));
}

DyadicBlock dyadic_block(const ManifoldConfig& cfg, double x, int j) {
  if (j < 0) throw DomainError("dyadic_block: j must be >= 0");
  DyadicBlock blk;
  blk.j = j;
  blk.m_hi = m_range_upper(cfg.theta, std::ldexp(x, -2 * j));
  blk.m_lo = m_range_upper(cfg.theta, std::ldexp(x, -2 * j - 2)) + 1;
  const long double M = std::sqrt(static_cast<long double>(x) / cfg.theta.approx_ld());
  blk.b = std::ldexp(M, -j);
  blk.a = std::ldexp(M, -j - 1);
  return blk;
}

Enclosure beta_endpoint(const IrrationalParameter& theta, std::int64_t h, int j, int bits) {
  // θh(2^(2j-1) + 1/2) = θh(4^j + 1)/2
  if (j < 0 || j > 30) throw DomainError("beta_endpoint: j out of range");
  const std::int64_t c = (std::int64_t{1} << (2 * j)) + 1;
  return theta.enclose(bits).mul(h).mul(c).div(2);
}

std::complex<long double> direct_S(const ManifoldConfig& cfg, double x, std::int64_t h, int j1, int j) {
  if (h < 1) throw DomainError("direct_S: h must be >= 1");
  if (j1 < 0 || j1 > cfg.l - 1) throw DomainError("direct_S: j1 must lie in [0, l-1]");
  const DyadicBlock blk = dyadic_block(cfg, x, j);
  if (blk.m_hi < blk.m_lo) return {0.0L, 0.0L};
  const long double th = cfg.theta.approx_ld();
  const long double X = x;
  const long double xp = std::pow(X, cfg.l - 1 - j1);
  ComplexSum s;
  for (std::int64_t m = blk.m_lo; m <= blk.m_hi; ++m) {
    const long double phase = -(h * X / (2.0L * m) - h * th * m / 2.0L);
    s.add(xp * std::pow(static_cast<long double>(m), 2 * j1 + 1) * e_ld(phase));
  }
  return s.value();
}

TransformReport transformed_S(const ManifoldConfig& cfg, double x, std::int64_t h, int j1, int j,
                              const EnvelopeConstants& k) {
  TransformReport rep;
  rep.direct = direct_S(cfg, x, h, j1, j);
  const DyadicBlock blk = dyadic_block(cfg, x, j);
  rep.m_count = std::max<std::int64_t>(0, blk.m_hi - blk.m_lo + 1);

  const CertifiedEndpoint lo = certify_endpoint(cfg.theta, h, j);
  const CertifiedEndpoint hi = certify_endpoint(cfg.theta, h, j + 1);
  rep.alpha = lo.value;
  rep.beta = hi.value;
  rep.endpoint_flagged = lo.integer_flag || hi.integer_flag;
  rep.r_lo = lo.integer_flag ? lo.floor : lo.floor + 1;
  rep.r_hi = hi.floor;

  const long double th = cfg.theta.approx_ld();
  const long double X = x;
  const int l = cfg.l;
  const long double amp0 = std::pow(X, l - 0.25L) * std::pow(static_cast<long double>(h), j1 + 0.75L);
  ComplexSum s;
  for (std::int64_t r = rep.r_lo; r <= rep.r_hi; ++r) {
    const long double n = 2.0L * r - th * h;
    long double w = 1.0L;
    if ((lo.integer_flag && r == lo.floor) || (hi.integer_flag && r == hi.floor)) w = 0.5L;
    s.add(w * amp0 * std::pow(n, -(j1 + 1.25L)) * e_ld(-std::sqrt(X * h * n)));
  }
  rep.transformed = std::polar(1.0L, -kPi / 4.0L) * s.value();

  // transform constants specialised to f(m) = -h(x/2m - θm/2) on (a, b]:
  // |f''| = hx/m³ ∈ [hx/b³, 8hx/b³], |f'''| <= 48hx/b⁴, g <= G, |g'| <= (2j1+1)G/a.
  const long double a = blk.a, b = blk.b;
  const long double G = std::pow(X, l - 1 - j1) * std::pow(b, 2 * j1 + 1);
  const long double R = b * b * b / (h * X);
  const long double U = std::max(1.0L, b);
  const long double U1 = std::max(1.0L, b);
  const long double span = rep.beta - rep.alpha;
  auto bracket = [&](const CertifiedEndpoint& e) -> long double {
    if (e.integer_flag) return span;
    const long double v = e.value;
    return std::min(v - std::floor(v), std::ceil(v) - v);
  };
  rep.e_log = static_cast<double>(G * std::log(span + 2.0L));
  rep.e_length = static_cast<double>(G * (b - a + R) * (1.0L / U + 1.0L / U1));
  rep.e_endpoint = static_cast<double>(
      G * std::min(std::sqrt(R), std::max(1.0L / bracket(lo), 1.0L / bracket(hi))));
  rep.envelope = k.log_term * rep.e_log + k.length_term * rep.e_length + k.endpoint_term * rep.e_endpoint;
  return rep;
}

double stationary_phase_defect(const ManifoldConfig& cfg, double x, std::int64_t h, std::int64_t r, int bits) {
  const Enclosure th = cfg.theta.enclose(std::min(bits, theta_max_bits(cfg.theta)));
  const mpfr_prec_t p = bits;
  BigFloat t(p), n(p), X(p), mr(p), f(p), lhs(p), rhs(p), tmp(p);
  mpfr_add(t.get(), th.lo().get(), th.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
  mpfr_set_d(X.get(), x, MPFR_RNDN);
  // n = 2r - θh
  mpfr_mul_si(n.get(), t.get(), static_cast<long>(h), MPFR_RNDN);
  mpfr_si_sub(n.get(), 2 * static_cast<long>(r), n.get(), MPFR_RNDN);
  if (mpfr_sgn(n.get()) <= 0) throw DomainError("stationary_phase_defect: need r > θh/2");
  // m_r = √(hx/n)
  mpfr_mul_si(mr.get(), X.get(), static_cast<long>(h), MPFR_RNDN);
  mpfr_div(mr.get(), mr.get(), n.get(), MPFR_RNDN);
  mpfr_sqrt(mr.get(), mr.get(), MPFR_RNDN);
  // f(m_r) = -h(x/2m_r - θm_r/2)
  mpfr_div(f.get(), X.get(), mr.get(), MPFR_RNDN);
  mpfr_mul(tmp.get(), t.get(), mr.get(), MPFR_RNDN);
  mpfr_sub(f.get(), f.get(), tmp.get(), MPFR_RNDN);
  mpfr_mul_si(f.get(), f.get(), -static_cast<long>(h), MPFR_RNDN);
  mpfr_div_2ui(f.get(), f.get(), 1, MPFR_RNDN);
  // lhs = f - r m_r
  mpfr_mul_si(tmp.get(), mr.get(), static_cast<long>(r), MPFR_RNDN);
  mpfr_sub(lhs.get(), f.get(), tmp.get(), MPFR_RNDN);
  // rhs = -√(x h n)
  mpfr_mul_si(rhs.get(), X.get(), static_cast<long>(h), MPFR_RNDN);
  mpfr_mul(rhs.get(), rhs.get(), n.get(), MPFR_RNDN);
  mpfr_sqrt(rhs.get(), rhs.get(), MPFR_RNDN);
  mpfr_neg(rhs.get(), rhs.get(), MPFR_RNDN);
  mpfr_sub(tmp.get(), lhs.get(), rhs.get(), MPFR_RNDN);
  mpfr_div(tmp.get(), tmp.get(), rhs.get(), MPFR_RNDN);
  return std::fabs(tmp.to_double());
}

std::complex<long double> assemble_F(const ManifoldConfig& cfg, double x, std::int64_t H, int j1, int J) {
  if (H < 1 || J < 0) throw DomainError("assemble_F: need H >= 1 and J >= 0");
  const auto blocks = split_range(1, H, 8);
  auto parts = parallel_blocks<ComplexSum>(blocks.size(), [&](std::size_t bi) {
    ComplexSum s;
    for (std::int64_t h = blocks[bi].lo; h <= blocks[bi].hi; ++h) {
      ComplexSum inner;
      for (int j = 0; j <= J; ++j) inner.add(direct_S(cfg, x, h, j1, j));
      const long double sign = (cfg.l * h) % 2 == 0 ? 1.0L : -1.0L;
      s.add(inner.value() * (sign / h));
    }
    return s;
  });
  ComplexSum sigma7;
  for (const auto& p : parts) sigma7.add(p);
  const std::complex<long double> s7 = sigma7.value();
  const std::complex<long double> pii(0.0L, kPi);
  return (std::conj(s7) - s7) / pii;
}

long double voronoi_u(const ManifoldConfig& cfg, std::int64_t h, std::int64_t r) {
  const long double th = cfg.theta.approx_ld();
  const long double n = 2.0L * r - th * h;
  if (!(r > th * h)) throw DomainError("voronoi_u: need r > θh");
  const long double sign = (cfg.l * h) % 2 == 0 ? 1.0L : -1.0L;
  return sign * std::pow(1.0L - th * h / n, cfg.l - 1) / (std::pow(static_cast<long double>(h), 0.25L) *
                                                          std::pow(n, 1.25L));
}

// ---------------------------------------------------------------------------

R11Series::R11Series(const ManifoldConfig& cfg, double T, const R11Options& opt) : cfg_(cfg), T_(T) {
  cfg_.validate();
  if (!(opt.relative_floor >= 0.0)) throw DomainError("r11: relative_floor must be >= 0");
  H_ = opt.H > 0.0 ? opt.H : T * T;
  if (!(H_ >= 2.0)) throw DomainError("r11: H must be >= 2");
  J_ = dyadic_cap(T);
  const long double th = cfg_.theta.approx_ld();
  const long double cap_factor = std::ldexp(1.0L, 2 * J_ + 1) + 0.5L;
  const auto Hmax = static_cast<std::int64_t>(std::floor(H_));

  // Reference magnitude: largest |u| in the h = 1 row.
  long double u_ref = 0.0L;
  {
    const auto r0 = static_cast<std::int64_t>(std::floor(th)) + 1;
    const auto rcap = static_cast<std::int64_t>(std::floor(th * cap_factor));
    for (std::int64_t r = r0; r <= rcap; ++r) {
      const long double n = 2.0L * r - th;
      if (std::pow(n, -1.25L) < u_ref) break;
      u_ref = std::max(u_ref, std::fabs(voronoi_u(cfg_, 1, r)));
    }
  }
  const long double floor_abs = opt.relative_floor * u_ref;
  floor_abs_ = static_cast<double>(floor_abs);

  CompensatedSum<long double> d_abs, d_sq;
  std::int64_t h = 1;
  for (; h <= Hmax; ++h) {
    const long double a = th * h;
    const long double h4 = std::pow(static_cast<long double>(h), -0.25L);
    if (floor_abs > 0 && h4 * std::pow(a, -1.25L) < floor_abs) break;
    const auto r0 = static_cast<std::int64_t>(std::floor(a)) + 1;
    const auto rcap = static_cast<std::int64_t>(std::floor(a * cap_factor));
    for (std::int64_t r = r0; r <= rcap; ++r) {
      const long double n = 2.0L * r - a;
      if (floor_abs > 0 && h4 * std::pow(n, -1.25L) < floor_abs) {
        d_abs.add(h4 * (std::pow(n, -1.25L) + 2.0L * std::pow(n, -0.25L)));
        d_sq.add(h4 * h4 * (std::pow(n, -2.5L) + std::pow(n, -1.5L) / 3.0L));
        break;
      }
      const long double u = voronoi_u(cfg_, h, r);
      if (std::fabs(u) < floor_abs) {
        d_abs.add(std::fabs(u));
        d_sq.add(u * u);
        continue;
      }
      hn_.push_back(h * n);
      u_.push_back(u);
    }
  }
  if (h <= Hmax) {
    // rows h..Hmax dropped entirely
    const long double hs = h, He = Hmax;
    const long double s32 = std::pow(hs, -1.5L) + 2.0L * (1.0L / std::sqrt(hs) - 1.0L / std::sqrt(He));
    const long double s12 = 1.0L / std::sqrt(hs) + 2.0L * (std::sqrt(He) - std::sqrt(hs));
    d_abs.add(std::pow(th, -1.25L) * s32 + 2.0L * std::pow(th, -0.25L) * s12);
    const long double s3 = std::pow(hs, -3.0L) + std::pow(hs, -2.0L) / 2.0L;
    const long double s2 = std::pow(hs, -2.0L) + 1.0L / hs;
    d_sq.add(std::pow(th, -2.5L) * s3 + std::pow(th, -1.5L) * s2 / 3.0L);
  }
  dropped_abs_ = static_cast<double>(d_abs.value());
  dropped_sq_ = static_cast<double>(d_sq.value());
}

long double R11Series::evaluate(double x) const {
  if (!(x >= T_ && x <= 2.0 * T_)) throw DomainError("r11: x must lie in [T, 2T]");
  const int l = cfg_.l;
  const long double X = x;
  const long double pref = std::ldexp(1.0L, 2 - l) * std::pow(X, l - 0.25L) / (factorial(l - 1) * kPi);
  CompensatedSum<long double> s;
  for (std::size_t i = 0; i < hn_.size(); ++i) {
    long double t = std::sqrt(X * hn_[i]) - 0.125L;
    t -= std::floor(t);
    s.add(u_[i] * std::cos(2.0L * kPi * t));
  }
  return pref * s.value();
}

long double r11(const ManifoldConfig& cfg, double x, double T, const R11Options& opt) {
  return R11Series(cfg, T, opt).evaluate(x);
}

// ---------------------------------------------------------------------------

long double diagonal_constant_extract(const ManifoldConfig& cfg, std::int64_t H, int J) {
  cfg.validate();
  if (H < 2) throw DomainError("diagonal_constant_extract: H must be >= 2");
  if (J < 0 || J > 30) throw DomainError("diagonal_constant_extract: J out of range");
  const long double th = cfg.theta.approx_ld();
  const int l = cfg.l;
  const int e = 2 * l - 2;
  const long double cap_factor = std::ldexp(1.0L, 2 * J + 1) + 0.5L;
  constexpr std::int64_t kDirect = 400;

  const auto blocks = split_range(1, H, 64);
  auto parts = parallel_blocks<CompensatedSum<long double>>(blocks.size(), [&](std::size_t bi) {
    CompensatedSum<long double> acc;
    for (std::int64_t h = blocks[bi].lo; h <= blocks[bi].hi; ++h) {
      const long double a = th * h;
      const auto r0 = static_cast<std::int64_t>(std::floor(a)) + 1;
      const auto rcap = static_cast<std::int64_t>(std::floor(a * cap_factor));
      CompensatedSum<long double> row;
      const std::int64_t rdirect = std::min(rcap, r0 + kDirect - 1);
      for (std::int64_t r = r0; r <= rdirect; ++r) {
        const long double n = 2.0L * r - a;
        row.add(std::pow(1.0L - a / n, e) * std::pow(n, -2.5L));
      }
      if (rdirect < rcap) {
        // midpoint rule: Σ_{r=r1}^{rcap} f(2r - a) ≈ (1/2)∫ f(n) dn over [2r1-1-a, 2rcap+1-a]
        auto prim = [&](long double n) {
          long double s = 0.0L;
          for (int k = 0; k <= e; ++k) {
            const long double p = 1.5L + k;
            s += binom_ld(e, k) * std::pow(-a, k) * std::pow(n, -p) / (-p);
          }
          return s;
        };
        const long double n1 = 2.0L * (rdirect + 1) - 1.0L - a;
        const long double n2 = 2.0L * rcap + 1.0L - a;
        row.add(0.5L * (prim(n2) - prim(n1)));
      }
      acc.add(row.value() / std::sqrt(static_cast<long double>(h)));
    }
    return acc;
  });
  CompensatedSum<long double> total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

}  // namespace hw
