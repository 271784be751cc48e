#include "hw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hw/parallel.hpp"

namespace hw {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kTwoPi = 2.0L * kPi;
// Relative error bound for λ computed in long double from an approximate θ.
constexpr long double kLineRelErr = 0x1p-56L;

int theta_max_bits(const IrrationalParameter& theta) {
  if (const auto* lit = std::get_if<DecimalLiteral>(&theta.repr())) return lit->bits;
  return kMaxPrecisionBits;
}

struct CertifiedFloor {
  std::int64_t value = 0;
  bool boundary = false;
};

// floor(v) where |v - true| <= err, falling back to `slow(bits)` enclosures.
template <class Slow>
CertifiedFloor certified_floor_of(long double v, long double err, int max_bits, Slow&& slow) {
  const long double a = std::floor(v - err);
  const long double b = std::floor(v + err);
  if (a == b) return {static_cast<std::int64_t>(a), false};
  for (int bits = 128; bits <= max_bits; bits *= 2) {
    const Enclosure e = slow(bits);
    if (auto f = e.certified_floor()) return {f->get_si(), false};
    if (bits * 2 > max_bits) {
      BigFloat m(e.precision());
      mpfr_add(m.get(), e.lo().get(), e.hi().get(), MPFR_RNDN);
      mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
      mpfr_floor(m.get(), m.get());
      return {mpfr_get_si(m.get(), MPFR_RNDN), true};
    }
  }
  return {static_cast<std::int64_t>(std::floor(v)), true};
}

Enclosure line_enclosure(const ManifoldConfig& cfg, const SpectralLine& s, int bits) {
  const Enclosure two_pi = Enclosure::pi(bits).mul(2);
  if (s.source == LineSource::type_i) return (two_pi * two_pi).mul(s.n);
  const Enclosure th = cfg.theta.enclose(bits);
  return two_pi * (th.mul(s.m).mul(s.m) + Enclosure::integer(s.m, bits).mul(s.k));
}

SpectralLine make_line(LineSource src, long double lambda, std::int64_t mult) {
  SpectralLine s;
  s.source = src;
  s.lambda = lambda;
  s.multiplicity = mult;
  if (lambda == 0.0L) return s;
  const long double lo = lambda * (1.0L - kLineRelErr);
  const long double hi = lambda * (1.0L + kLineRelErr);
  s.lambda_lo = std::nextafter(static_cast<double>(lo), 0.0);
  s.lambda_hi = std::nextafter(static_cast<double>(hi), INFINITY);
  return s;
}

std::int64_t ipow(std::int64_t b, int e) {
  __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > INT64_MAX) throw DomainError("multiplicity overflows 64 bits");
  }
  return static_cast<std::int64_t>(r);
}

// C(n, r) with overflow detection.
std::uint64_t binom(std::int64_t n, std::int64_t r) {
  if (r < 0 || n < r) return 0;
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    c = c * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
    if (c > UINT64_MAX) throw DomainError("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

long double ManifoldConfig::weyl_coefficient() const {
  const int n = dimension();
  const long double ball = std::pow(kPi, n / 2.0L) / std::tgamma(n / 2.0L + 1.0L);
  const long double vol = std::sqrt(kTwoPi / theta.approx_ld());
  return ball * vol / std::pow(kTwoPi, static_cast<long double>(n));
}

void ManifoldConfig::validate() const {
  if (l < 1) throw ConfigError("l must be >= 1");
  if (l > 16) throw ConfigError("l > 16 is not supported");
}

std::uint64_t composition_count(std::int64_t k, int l) {
  if (l < 1) throw DomainError("composition_count: l must be >= 1");
  if (k < l || (k - l) % 2 != 0) return 0;
  return binom((k - l) / 2 + l - 1, l - 1);
}

std::vector<std::int64_t> r2l_shell_histogram(int l, std::int64_t n_max, std::int64_t max_entries) {
  if (l < 1) throw DomainError("r2l_shell_histogram: l must be >= 1");
  if (n_max < 0) throw DomainError("r2l_shell_histogram: n_max must be >= 0");
  if (n_max + 1 > max_entries) {
    throw BudgetError("r2l_shell_histogram: " + std::to_string(n_max + 1) +
                      " shells exceed the memory budget; use chunked recount");
  }
  const auto size = static_cast<std::size_t>(n_max + 1);
  std::vector<std::int64_t> squares;  // a >= 0 with a² <= n_max
  for (std::int64_t a = 0; a * a <= n_max; ++a) squares.push_back(a * a);

  // one coordinate: r_1
  std::vector<std::int64_t> cur(size, 0);
  for (std::size_t i = 0; i < squares.size(); ++i) cur[static_cast<std::size_t>(squares[i])] = i == 0 ? 1 : 2;
  for (int dim = 2; dim <= 2 * l; ++dim) {
    std::vector<std::int64_t> next(size, 0);
    for (std::size_t n = 0; n < size; ++n) {
      if (cur[n] == 0) continue;
      for (std::size_t i = 0; i < squares.size(); ++i) {
        const std::size_t idx = n + static_cast<std::size_t>(squares[i]);
        if (idx >= size) break;
        next[idx] += (i == 0 ? 1 : 2) * cur[n];
      }
    }
    cur.swap(next);
  }
  return cur;
}

namespace {

void chunk_recurse(int dims_left, std::int64_t partial, std::int64_t n0, std::int64_t n1, std::int64_t weight,
                   std::vector<std::int64_t>& out) {
  if (dims_left == 1) {
    for (std::int64_t a = 0; partial + a * a < n1; ++a) {
      const std::int64_t s = partial + a * a;
      if (s >= n0) out[static_cast<std::size_t>(s - n0)] += weight * (a == 0 ? 1 : 2);
    }
    return;
  }
  for (std::int64_t a = 0; partial + a * a < n1; ++a) {
    chunk_recurse(dims_left - 1, partial + a * a, n0, n1, weight * (a == 0 ? 1 : 2), out);
  }
}

}  // namespace

std::vector<std::int64_t> r2l_shell_chunk(int l, std::int64_t n0, std::int64_t n1) {
  if (l < 1 || n0 < 0 || n1 < n0) throw DomainError("r2l_shell_chunk: bad arguments");
  std::vector<std::int64_t> out(static_cast<std::size_t>(n1 - n0), 0);
  chunk_recurse(2 * l, 0, n0, n1, 1, out);
  return out;
}

int compare_lines(const ManifoldConfig& cfg, const SpectralLine& a, const SpectralLine& b) {
  if (a.source == b.source && a.m == b.m && a.k == b.k && a.n == b.n) return 0;
  if (a.lambda_hi < b.lambda_lo) return -1;
  if (a.lambda_lo > b.lambda_hi) return 1;
  if (a.source == LineSource::type_i && b.source == LineSource::type_i) return a.n < b.n ? -1 : 1;
  if (a.source == LineSource::type_ii && b.source == LineSource::type_ii) {
    // Both scale by 2π: compare θ(m1² - m2²) + (m1k1 - m2k2) with 0.
    const std::int64_t dq = a.m * a.m - b.m * b.m;
    const std::int64_t dz = a.m * a.k - b.m * b.k;
    if (dq == 0) return dz < 0 ? -1 : 1;
    for (int bits = 128; bits <= theta_max_bits(cfg.theta); bits *= 2) {
      const Enclosure v = cfg.theta.enclose(bits).mul(dq).add(dz);
      if (v.strictly_negative()) return -1;
      if (v.strictly_positive()) return 1;
    }
    throw PrecisionError("compare_lines: cannot separate Type II lines (m,k)=(" + std::to_string(a.m) + "," +
                         std::to_string(a.k) + ") and (" + std::to_string(b.m) + "," + std::to_string(b.k) + ")");
  }
  for (int bits = 128; bits <= theta_max_bits(cfg.theta); bits *= 2) {
    if (auto c = Enclosure::compare(line_enclosure(cfg, a, bits), line_enclosure(cfg, b, bits))) return *c;
  }
  const SpectralLine& t1 = a.source == LineSource::type_i ? a : b;
  const SpectralLine& t2 = a.source == LineSource::type_i ? b : a;
  throw PrecisionError("compare_lines: ordering ambiguity between Type I n=" + std::to_string(t1.n) +
                       " and Type II (m,k)=(" + std::to_string(t2.m) + "," + std::to_string(t2.k) + ")");
}

std::vector<SpectralLine> enumerate_spectrum(const ManifoldConfig& cfg, double t_max) {
  cfg.validate();
  if (!(t_max > 0.0)) throw DomainError("enumerate_spectrum: t_max must be positive");
  const long double th = cfg.theta.approx_ld();
  const long double x = static_cast<long double>(t_max) / kTwoPi;
  const int l = cfg.l;

  // Type II, blocked by m. A line is kept only if its certified upper bound
  // is <= t_max or a certified comparison says so.
  const auto m_max = static_cast<std::int64_t>(std::floor(std::sqrt(x / th))) + 1;
  const auto blocks = split_range(1, m_max, 16);
  auto parts = parallel_blocks<std::vector<SpectralLine>>(blocks.size(), [&](std::size_t bi) {
    std::vector<SpectralLine> out;
    for (std::int64_t m = blocks[bi].lo; m <= blocks[bi].hi; ++m) {
      const std::int64_t weight = 2 * ipow(m, l);
      for (std::int64_t k = l;; k += 2) {
        const long double lam = kTwoPi * (th * m * m + static_cast<long double>(m * k));
        SpectralLine s = make_line(LineSource::type_ii, lam, weight * static_cast<std::int64_t>(composition_count(k, l)));
        s.m = m;
        s.k = k;
        if (s.lambda_lo > t_max) break;
        if (s.lambda_hi > t_max) {
          const int bits = std::min(256, theta_max_bits(cfg.theta));
          const Enclosure e = line_enclosure(cfg, s, bits);
          if (mpfr_cmp_d(e.lo().get(), t_max) > 0) break;
          if (mpfr_cmp_d(e.hi().get(), t_max) > 0) {
            throw PrecisionError("enumerate_spectrum: eigenvalue indistinguishable from t_max");
          }
        }
        out.push_back(s);
      }
    }
    return out;
  });

  std::vector<SpectralLine> lines;
  // Type I shells
  const auto n_max = static_cast<std::int64_t>(std::floor(static_cast<long double>(t_max) / (kTwoPi * kTwoPi))) + 1;
  const auto hist = r2l_shell_histogram(l, n_max);
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const std::int64_t r = hist[static_cast<std::size_t>(n)];
    if (r == 0) continue;
    SpectralLine s = make_line(LineSource::type_i, kTwoPi * kTwoPi * static_cast<long double>(n), r);
    s.n = n;
    if (s.lambda_lo > t_max) continue;
    if (s.lambda_hi > t_max) {
      const Enclosure e = line_enclosure(cfg, s, 256);
      if (mpfr_cmp_d(e.lo().get(), t_max) > 0) continue;
    }
    lines.push_back(s);
  }
  for (auto& p : parts) lines.insert(lines.end(), p.begin(), p.end());
  std::sort(lines.begin(), lines.end(),
            [&](const SpectralLine& a, const SpectralLine& b) { return compare_lines(cfg, a, b) < 0; });
  return lines;
}

// ---------------------------------------------------------------------------

SpectrumCounter::SpectrumCounter(ManifoldConfig cfg, double t_max) : cfg_(std::move(cfg)), t_max_(t_max) {
  cfg_.validate();
  if (!(t_max > 0.0)) throw DomainError("SpectrumCounter: t_max must be positive");
  const auto n_max = static_cast<std::int64_t>(std::floor(static_cast<long double>(t_max) / (kTwoPi * kTwoPi))) + 1;
  torus_cum_ = r2l_shell_histogram(cfg_.l, n_max);
  for (std::size_t i = 1; i < torus_cum_.size(); ++i) torus_cum_[i] += torus_cum_[i - 1];
  weyl_ = cfg_.weyl_coefficient();
}

std::int64_t SpectrumCounter::torus_cumulative(double t, bool& boundary) const {
  const long double v = static_cast<long double>(t) / (kTwoPi * kTwoPi);
  const auto f = certified_floor_of(v, v * 0x1p-58L + 0x1p-120L, kMaxPrecisionBits, [&](int bits) {
    const Enclosure tp = Enclosure::pi(bits).mul(2);
    return Enclosure::point(t, bits) / (tp * tp);
  });
  boundary = boundary || f.boundary;
  if (f.value < 0) return 0;
  return torus_cum_.at(static_cast<std::size_t>(f.value));
}

std::int64_t SpectrumCounter::type_ii_count(double t, bool& boundary) const {
  const long double th = cfg_.theta.approx_ld();
  const long double x = static_cast<long double>(t) / kTwoPi;
  const int l = cfg_.l;
  const int max_bits = theta_max_bits(cfg_.theta);
  __int128 total = 0;
  for (std::int64_t m = 1;; ++m) {
    const long double v = (x / m - th * m - l) / 2.0L;
    const long double err = (x / m + th * m + l) * 0x1p-58L;
    const auto f = certified_floor_of(v, err, max_bits, [&](int bits) {
      const Enclosure xe = Enclosure::point(t, bits) / Enclosure::pi(bits).mul(2);
      return (xe.div(m) - cfg_.theta.enclose(bits).mul(m)).add(-l).div(2);
    });
    boundary = boundary || f.boundary;
    if (f.value < 0) break;
    total += static_cast<__int128>(2 * ipow(m, l)) * binom(f.value + l, l);
  }
  if (total > INT64_MAX) throw DomainError("N(t) overflows 64 bits");
  return static_cast<std::int64_t>(total);
}

CountingPoint SpectrumCounter::count(double t) const {
  if (!(t > 0.0)) throw DomainError("count_N: t must be positive");
  if (t > t_max_) throw NeedsMoreSpectrum("count_N: t exceeds the counter's range");
  CountingPoint p;
  p.t = t;
  p.N = torus_cumulative(t, p.boundary) + type_ii_count(t, p.boundary);
  p.main = weyl_ * std::pow(static_cast<long double>(t), cfg_.l + 0.5L);
  p.R = static_cast<long double>(p.N) - p.main;
  return p;
}

CountingPoint count_N(const ManifoldConfig& cfg, double t) {
  if (!(t > 0.0)) throw DomainError("count_N: t must be positive");
  return SpectrumCounter(cfg, t).count(t);
}

JumpTable build_jump_table(const ManifoldConfig& cfg, double t_max) {
  const auto lines = enumerate_spectrum(cfg, t_max);
  JumpTable jt;
  jt.t_max = t_max;
  jt.lambda.reserve(lines.size());
  jt.N_after.reserve(lines.size());
  std::int64_t n = 0;
  for (const auto& s : lines) {
    n += s.multiplicity;
    jt.lambda.push_back(s.lambda);
    jt.N_after.push_back(n);
  }
  return jt;
}

}  // namespace hw
