#include "hw/psiexpr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hw/parallel.hpp"

namespace hw {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

int theta_max_bits(const IrrationalParameter& theta) {
  if (const auto* lit = std::get_if<DecimalLiteral>(&theta.repr())) return lit->bits;
  return kMaxPrecisionBits;
}

}  // namespace

std::int64_t m_range_upper(const IrrationalParameter& theta, double x) {
  if (x <= 0) return 0;
  const long double th = theta.approx_ld();
  auto m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(x) / th)));
  auto fits = [&](std::int64_t mm) {
    if (mm <= 0) return true;
    const long double v = th * mm * mm;
    const long double err = v * 0x1p-58L;
    if (v + err < x) return true;
    if (v - err > x) return false;
    for (int bits = 128; bits <= theta_max_bits(theta); bits *= 2) {
      const Enclosure e = theta.enclose(bits).mul(mm).mul(mm);
      if (mpfr_cmp_d(e.hi().get(), x) <= 0) return true;
      if (mpfr_cmp_d(e.lo().get(), x) > 0) return false;
    }
    throw PrecisionError("θm² cannot be separated from x");
  };
  while (m > 0 && !fits(m)) --m;
  while (fits(m + 1)) ++m;
  return m;
}

namespace {

// ψ(x/2m - θm/2 + shift/2) with certification.
PsiValue psi_phase(const IrrationalParameter& theta, double x, std::int64_t m, int shift) {
  const long double th = theta.approx_ld();
  const long double v = static_cast<long double>(x) / (2.0L * m) - th * m / 2.0L + shift / 2.0L;
  const long double err = (static_cast<long double>(x) / (2.0L * m) + th * m + std::abs(shift)) * 0x1p-58L;
  if (std::floor(v - err) == std::floor(v + err)) {
    return {static_cast<double>(v - std::floor(v) - 0.5L), false};
  }
  const int max_bits = theta_max_bits(theta);
  PsiValue last;
  for (int bits = 128; bits <= max_bits; bits *= 2) {
    Enclosure e = Enclosure::point(x, bits).div(2 * m) - theta.enclose(bits).mul(m).div(2);
    e = (e + Enclosure::integer(shift, bits).div(2));
    last = psi(e);
    if (!last.boundary) return last;
  }
  return last;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

long double factorial(int n) {
  long double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

PsiSumValue psi_sum_R(const ManifoldConfig& cfg, double x) {
  cfg.validate();
  PsiSumValue out;
  const std::int64_t M = m_range_upper(cfg.theta, x);
  if (M < 1) return out;
  const int l = cfg.l;
  const long double th = cfg.theta.approx_ld();
  const long double coef = 4.0L / (std::ldexp(1.0L, l) * factorial(l - 1));
  struct Part {
    CompensatedSum<long double> sum;
    std::int64_t boundary = 0;
  };
  const auto blocks = split_range(1, M, 256);
  auto parts = parallel_blocks<Part>(blocks.size(), [&](std::size_t bi) {
    Part p;
    for (std::int64_t m = blocks[bi].lo; m <= blocks[bi].hi; ++m) {
      const PsiValue ps = psi_phase(cfg.theta, x, m, -l);
      if (ps.boundary) ++p.boundary;
      const long double w = l == 1 ? 1.0L : std::pow(static_cast<long double>(x) - th * m * m, l - 1);
      p.sum.add(static_cast<long double>(m) * w * ps.value);
    }
    return p;
  });
  CompensatedSum<long double> total;
  for (const auto& p : parts) {
    total.add(p.sum);
    out.boundary_count += p.boundary;
  }
  out.value = -coef * total.value();
  out.terms = M;
  return out;
}

std::vector<double> log_spaced(double a, double b, int n) {
  if (n < 1 || !(a > 0) || !(b >= a)) throw DomainError("log_spaced: need n >= 1 and 0 < a <= b");
  std::vector<double> xs(static_cast<std::size_t>(n));
  if (n == 1) {
    xs[0] = a;
    return xs;
  }
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  xs.front() = a;
  xs.back() = b;
  return xs;
}

ResidualProfile residual_profile(const ManifoldConfig& cfg, const std::vector<double>& xs) {
  ResidualProfile out;
  if (xs.empty()) return out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0)) throw DomainError("residual_profile: samples must be positive");
    if (i > 0 && xs[i] < xs[i - 1]) throw DomainError("residual_profile: samples must be sorted");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const SpectrumCounter counter(cfg, two_pi * xs.back() * (1 + 1e-12));
  out.points.resize(xs.size());
  auto parts = parallel_blocks<ResidualPoint>(xs.size(), [&](std::size_t i) {
    ResidualPoint p;
    p.x = xs[i];
    const CountingPoint c = counter.count(two_pi * xs[i]);
    const PsiSumValue s = psi_sum_R(cfg, xs[i]);
    p.R_exact = c.R;
    p.psi_sum = s.value;
    p.residual = c.R - s.value;
    p.boundary = c.boundary || s.boundary_count > 0;
    return p;
  });
  out.points = std::move(parts);
  std::vector<double> lx, ly;
  for (const auto& p : out.points) {
    if (p.boundary) ++out.boundary_count;
    if (p.residual != 0) {
      lx.push_back(std::log(p.x));
      ly.push_back(std::log(std::fabs(static_cast<double>(p.residual))));
    }
  }
  if (lx.size() >= 2) out.slope = ls_slope(lx, ly);
  return out;
}

// ---------------------------------------------------------------------------

ExpansionReport truncated_fourier_psi(double u, double H) {
  if (!(H >= 2.0)) throw DomainError("truncated_fourier_psi: H must be >= 2");
  const auto N = static_cast<std::int64_t>(std::floor(H));
  const long double uf = static_cast<long double>(u) - std::floor(static_cast<long double>(u));
  CompensatedSum<long double> s;
  for (std::int64_t h = 1; h <= N; ++h) {
    long double r = h * uf;
    r -= std::floor(r);
    s.add(std::sin(2.0L * kPi * r) / h);
  }
  ExpansionReport rep;
  rep.value = static_cast<double>(-s.value() / kPi);
  const double d = static_cast<double>(std::min(uf, 1.0L - uf));
  rep.envelope = d == 0.0 ? 1.0 : std::min(1.0, 1.0 / (H * d));
  rep.boundary_count = uf == 0.0L ? 1 : 0;
  return rep;
}

namespace {

long double vaaler_phi(long double t) {
  return kPi * t * (1.0L - t) / std::tan(kPi * t) + t;
}

}  // namespace

ExpansionReport vaaler_psi(double u, double H) {
  if (!(H >= 2.0)) throw DomainError("vaaler_psi: H must be >= 2");
  const auto N = static_cast<std::int64_t>(std::floor(H));
  const long double N1 = static_cast<long double>(N + 1);
  const long double uf = static_cast<long double>(u) - std::floor(static_cast<long double>(u));
  CompensatedSum<long double> val, env;
  env.add(1.0L);
  for (std::int64_t h = 1; h <= N; ++h) {
    long double r = h * uf;
    r -= std::floor(r);
    const long double a = 2.0L * kPi * r;
    val.add(vaaler_phi(h / N1) * std::sin(a) / h);
    env.add(2.0L * (1.0L - h / N1) * std::cos(a));
  }
  ExpansionReport rep;
  rep.value = static_cast<double>(-val.value() / kPi);
  rep.envelope = uf == 0.0L ? 0.5 : static_cast<double>(std::max(0.0L, env.value() / (2.0L * N1)));
  rep.boundary_count = uf == 0.0L ? 1 : 0;
  return rep;
}

VaalerCoefficients vaaler_coefficients(double H) {
  if (!(H >= 2.0)) throw DomainError("vaaler_coefficients: H must be >= 2");
  VaalerCoefficients c;
  c.N = static_cast<int>(std::floor(H));
  const long double N1 = c.N + 1.0L;
  for (int h = 1; h <= c.N; ++h) {
    const double a = static_cast<double>(vaaler_phi(h / N1) / (2.0L * kPi * h));
    c.a_abs.push_back(a);
    c.max_h_a = std::max(c.max_h_a, h * a);
  }
  for (int h = 0; h <= c.N; ++h) {
    const double b = static_cast<double>((1.0L - h / N1) / (2.0L * N1));
    c.b.push_back(b);
    c.max_H_b = std::max(c.max_H_b, H * b);
  }
  return c;
}

long double g_sum(const ManifoldConfig& cfg, double x, double H) {
  if (!(H >= 2.0)) throw DomainError("g_sum: H must be >= 2");
  if (!(x > 0.0)) throw DomainError("g_sum: x must be positive");
  const std::int64_t M = m_range_upper(cfg.theta, x);
  const long double th = cfg.theta.approx_ld();
  CompensatedSum<long double> s;
  for (std::int64_t m = 1; m <= M; ++m) {
    const long double v = static_cast<long double>(x) / (2.0L * m) - th * m / 2.0L + cfg.l / 2.0L;
    const long double d = std::min(v - std::floor(v), std::ceil(v) - v);
    s.add(d * H <= 1.0L ? 1.0L : 1.0L / (H * d));
  }
  return s.value();
}

namespace {

// ∫_0^f min(1, 1/(H‖u‖)) du for f in [0, 1].
long double g_primitive_frac(long double f, long double H) {
  auto half = [H](long double v) {
    return v * H <= 1.0L ? v : 1.0L / H + std::log(v * H) / H;
  };
  if (f <= 0.5L) return half(f);
  return 2.0L * half(0.5L) - half(1.0L - f);
}

long double g_primitive(long double u, long double H) {
  const long double fl = std::floor(u);
  return fl * g_primitive_frac(1.0L, H) + g_primitive_frac(u - fl, H);
}

}  // namespace

long double g_integral(const ManifoldConfig& cfg, double a, double b, double H) {
  if (!(H >= 2.0)) throw DomainError("g_integral: H must be >= 2");
  if (!(a > 0.0) || !(b >= a)) throw DomainError("g_integral: need 0 < a <= b");
  const std::int64_t M = m_range_upper(cfg.theta, b);
  const long double th = cfg.theta.approx_ld();
  const auto blocks = split_range(1, M, 256);
  auto parts = parallel_blocks<CompensatedSum<long double>>(blocks.size(), [&](std::size_t bi) {
    CompensatedSum<long double> s;
    for (std::int64_t m = blocks[bi].lo; m <= blocks[bi].hi; ++m) {
      const long double lo = std::max(static_cast<long double>(a), th * m * m);
      const long double hi = b;
      if (hi <= lo) continue;
      const long double c = -th * m / 2.0L + cfg.l / 2.0L;
      const long double u0 = lo / (2.0L * m) + c;
      const long double u1 = hi / (2.0L * m) + c;
      s.add(2.0L * m * (g_primitive(u1, H) - g_primitive(u0, H)));
    }
    return s;
  });
  CompensatedSum<long double> total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

}  // namespace hw
