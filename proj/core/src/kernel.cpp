#include "hw/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

namespace hw {

namespace {

bool is_perfect_square(std::int64_t d) {
  if (d < 0) return false;
  mpz_class z(static_cast<long>(d));
  return mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

int bit_length(std::int64_t v) {
  std::uint64_t u = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  int n = 0;
  while (u) {
    ++n;
    u >>= 1;
  }
  return n;
}

Enclosure surd_enclosure(const QuadraticSurd& s, mpfr_prec_t prec) {
  Enclosure root = Enclosure::integer(s.d, prec).sqrt();
  return (root.mul(s.q) + Enclosure::integer(s.p, prec)).div(s.s);
}

bool width_within(const Enclosure& e, int bits) {
  // hi - lo <= 2^(1 - bits)
  BigFloat w = e.width();
  return mpfr_cmp_si_2exp(w.get(), 1, static_cast<mpfr_exp_t>(1 - bits)) <= 0;
}

std::int64_t pq_stream(const PartialQuotients& pq, std::size_t i) {
  const auto& a = pq.prefix;
  if (i < a.size() && (pq.rule == ContinuationRule::constant || i == 0)) return a[i];
  if (pq.rule == ContinuationRule::constant) return a.back();
  const std::size_t period = a.size() - 1;
  return a[1 + (i - 1) % period];
}

}  // namespace

int default_precision_bits() {
  if (const char* env = std::getenv("HW_PRECISION_BITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= kMinPrecisionBits && v <= kMaxPrecisionBits) {
      return static_cast<int>(v);
    }
  }
  return kDefaultPrecisionBits;
}

// ---------------------------------------------------------------------------
// IrrationalParameter

IrrationalParameter::IrrationalParameter(Repr repr) : repr_(std::move(repr)) {}

IrrationalParameter IrrationalParameter::quadratic_surd(std::int64_t p, std::int64_t q,
                                                        std::int64_t s, std::int64_t d) {
  if (d <= 1) throw ConfigError("quadratic-surd: d must be > 1");
  if (is_perfect_square(d)) throw ConfigError("quadratic-surd: d is a perfect square, value is rational");
  if (q == 0) throw ConfigError("quadratic-surd: q must be nonzero");
  if (s == 0) throw ConfigError("quadratic-surd: s must be nonzero");
  IrrationalParameter t(QuadraticSurd{p, q, s, d});
  if (!surd_enclosure(QuadraticSurd{p, q, s, d}, 256).strictly_positive()) {
    throw ConfigError("quadratic-surd: value must be positive");
  }
  t.gamma_ = 1.0;
  t.type_note_ = "quadratic irrational: type 1";
  t.cache_approx();
  return t;
}

IrrationalParameter IrrationalParameter::partial_quotients(std::vector<std::int64_t> prefix,
                                                           ContinuationRule rule) {
  if (prefix.empty()) throw ConfigError("partial-quotients: empty prefix");
  if (prefix[0] < 0) throw ConfigError("partial-quotients: a0 must be >= 0 for a positive value");
  for (std::size_t i = 1; i < prefix.size(); ++i) {
    if (prefix[i] < 1) throw ConfigError("partial-quotients: a_i must be >= 1 for i >= 1");
  }
  if (rule == ContinuationRule::periodic && prefix.size() < 2) {
    throw ConfigError("partial-quotients: periodic rule needs at least one quotient after a0");
  }
  if (rule == ContinuationRule::constant && prefix.size() == 1 && prefix[0] < 1) {
    throw ConfigError("partial-quotients: constant continuation of a0 = 0");
  }
  IrrationalParameter t(PartialQuotients{std::move(prefix), rule});
  // Eventually periodic continued fractions are quadratic irrationals.
  t.gamma_ = 1.0;
  t.type_note_ = "eventually periodic continued fraction: type 1";
  t.cache_approx();
  return t;
}

IrrationalParameter IrrationalParameter::literal(std::string decimal, int bits) {
  if (bits < kMinPrecisionBits || bits > kMaxPrecisionBits) {
    throw ConfigError("literal: bits must lie in [64, 16384]");
  }
  {
    BigFloat probe(bits + 64);
    if (mpfr_set_str(probe.get(), decimal.c_str(), 10, MPFR_RNDN) != 0) {
      throw ConfigError("literal: cannot parse decimal '" + decimal + "'");
    }
    if (mpfr_sgn(probe.get()) <= 0) throw ConfigError("literal: value must be positive");
  }
  IrrationalParameter t(DecimalLiteral{std::move(decimal), bits});
  t.cache_approx();
  return t;
}

IrrationalParameter::Kind IrrationalParameter::kind() const {
  return static_cast<Kind>(repr_.index());
}

std::optional<double> IrrationalParameter::declared_type() const { return gamma_; }

IrrationalParameter IrrationalParameter::with_declared_type(double gamma, std::string note) const {
  if (!(gamma >= 1.0)) throw DomainError("approximation type must be >= 1");
  IrrationalParameter t = *this;
  t.gamma_ = gamma;
  t.type_note_ = std::move(note);
  return t;
}

Enclosure IrrationalParameter::enclose(int bits) const {
  if (bits < kMinPrecisionBits) throw DomainError("eval_theta: precision must be >= 64 bits");
  if (const auto* s = std::get_if<QuadraticSurd>(&repr_)) {
    mpfr_prec_t prec = bits + 32 + bit_length(s->p) + bit_length(s->q) + bit_length(s->s) +
                       bit_length(s->d);
    for (;; prec *= 2) {
      Enclosure e = surd_enclosure(*s, prec);
      if (width_within(e, bits)) return e;
      if (prec > 4 * kMaxPrecisionBits) throw PrecisionError("eval_theta: surd enclosure too wide");
    }
  }
  if (const auto* pq = std::get_if<PartialQuotients>(&repr_)) {
    // Consecutive convergents bracket θ and differ by 1/(q_k q_{k+1}).
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = pq_stream(*pq, 0), q = 1;
    mpz_class target = 1;
    target <<= static_cast<mp_bitcnt_t>(bits + 1);
    for (std::size_t i = 1;; ++i) {
      const mpz_class a = static_cast<long>(pq_stream(*pq, i));
      mpz_class p_next = a * p + p_prev;
      mpz_class q_next = a * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = p_next;
      q = q_next;
      if (q * q_prev >= target) break;
    }
    const mpfr_prec_t prec = bits + 64;
    Enclosure a = Enclosure::rational(mpq_class(p_prev, q_prev), prec);
    Enclosure b = Enclosure::rational(mpq_class(p, q), prec);
    const bool a_low = mpfr_lessequal_p(a.lo().get(), b.lo().get());
    return Enclosure::from_bounds(a_low ? a.lo() : b.lo(), a_low ? b.hi() : a.hi());
  }
  const auto& lit = std::get<DecimalLiteral>(repr_);
  if (bits > lit.bits) {
    throw PrecisionError("eval_theta: literal is known to " + std::to_string(lit.bits) +
                         " bits, " + std::to_string(bits) + " requested");
  }
  const mpfr_prec_t prec = lit.bits + 64;
  Enclosure e(prec);
  mpfr_set_str(e.lo().get(), lit.decimal.c_str(), 10, MPFR_RNDD);
  mpfr_set_str(e.hi().get(), lit.decimal.c_str(), 10, MPFR_RNDU);
  BigFloat slack(prec);
  mpfr_set_si_2exp(slack.get(), 1, -lit.bits, MPFR_RNDN);
  mpfr_sub(e.lo().get(), e.lo().get(), slack.get(), MPFR_RNDD);
  mpfr_add(e.hi().get(), e.hi().get(), slack.get(), MPFR_RNDU);
  return e;
}

void IrrationalParameter::cache_approx() {
  int bits = kDefaultPrecisionBits;
  if (const auto* lit = std::get_if<DecimalLiteral>(&repr_)) bits = std::min(lit->bits, bits);
  Enclosure e = enclose(bits);
  approx_ld_ = e.mid_long_double();
  approx_ = static_cast<double>(approx_ld_);
  BigFloat d(e.precision());
  BigFloat a(e.precision());
  mpfr_set_d(a.get(), approx_, MPFR_RNDN);
  mpfr_sub(d.get(), e.hi().get(), a.get(), MPFR_RNDU);
  BigFloat d2(e.precision());
  mpfr_sub(d2.get(), a.get(), e.lo().get(), MPFR_RNDU);
  approx_err_ = std::max(d.to_double(MPFR_RNDU), d2.to_double(MPFR_RNDU));
}

std::int64_t IrrationalParameter::stream_quotient(std::size_t i) const {
  const auto* pq = std::get_if<PartialQuotients>(&repr_);
  if (!pq) throw DomainError("stream_quotient: not a partial-quotient parameter");
  return pq_stream(*pq, i);
}

std::string IrrationalParameter::describe() const {
  std::ostringstream os;
  if (const auto* s = std::get_if<QuadraticSurd>(&repr_)) {
    os << "(" << s->p << " + " << s->q << "*sqrt(" << s->d << "))/" << s->s;
  } else if (const auto* pq = std::get_if<PartialQuotients>(&repr_)) {
    os << "[";
    for (std::size_t i = 0; i < pq->prefix.size(); ++i) {
      os << pq->prefix[i] << (i == 0 ? ";" : (i + 1 < pq->prefix.size() ? "," : ""));
    }
    os << (pq->rule == ContinuationRule::periodic ? ", periodic...]" : ", constant...]");
  } else {
    const auto& lit = std::get<DecimalLiteral>(repr_);
    os << lit.decimal << " (" << lit.bits << " bits)";
  }
  return os.str();
}

Enclosure eval_theta(const IrrationalParameter& theta, int precision_bits) {
  return theta.enclose(precision_bits);
}

// ---------------------------------------------------------------------------
// ψ, ‖·‖, e(·)

PsiValue psi(const Enclosure& t) {
  PsiValue out;
  out.boundary = t.contains_integer();
  BigFloat m(t.precision() + 1);
  mpfr_add(m.get(), t.lo().get(), t.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  BigFloat f(m.precision());
  mpfr_floor(f.get(), m.get());
  mpfr_sub(f.get(), m.get(), f.get(), MPFR_RNDN);  // exact
  mpfr_sub_d(f.get(), f.get(), 0.5, MPFR_RNDN);
  out.value = std::min(f.to_double(MPFR_RNDD), std::nextafter(0.5, 0.0));
  return out;
}

double psi(double t) {
  const double v = (t - std::floor(t)) - 0.5;
  return v >= 0.5 ? std::nextafter(0.5, 0.0) : v;
}

long double psi(long double t) {
  const long double v = (t - std::floor(t)) - 0.5L;
  return v >= 0.5L ? std::nextafter(0.5L, 0.0L) : v;
}

double dist_to_int(const Enclosure& t) {
  BigFloat m(t.precision() + 1);
  mpfr_add(m.get(), t.lo().get(), t.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  BigFloat r(m.precision());
  mpfr_round(r.get(), m.get());
  mpfr_sub(r.get(), m.get(), r.get(), MPFR_RNDN);
  return std::fabs(r.to_double());
}

double dist_to_int(double t) {
  const double f = t - std::floor(t);
  return std::min(f, 1.0 - f);
}

std::complex<double> unit_phase(long double t) {
  const long double r = t - std::floor(t + 0.5L);
  const long double a = 2.0L * std::numbers::pi_v<long double> * r;
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

// ---------------------------------------------------------------------------
// Continued fractions

std::vector<Convergent> convergents_of(const std::vector<mpz_class>& quotients) {
  std::vector<Convergent> out;
  out.reserve(quotients.size());
  mpz_class p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (const auto& a : quotients) {
    mpz_class p = a * p1 + p2;
    mpz_class q = a * q1 + q2;
    out.push_back({p, q});
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
  }
  return out;
}

namespace {

std::vector<mpz_class> common_prefix_cf(mpq_class lo, mpq_class hi, int depth) {
  std::vector<mpz_class> out;
  for (int i = 0; i < depth; ++i) {
    mpz_class al, ah;
    mpz_fdiv_q(al.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(ah.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (al != ah) break;
    out.push_back(al);
    lo -= al;
    hi -= al;
    if (lo == 0 || hi == 0) break;
    lo = 1 / lo;
    hi = 1 / hi;
  }
  return out;
}

}  // namespace

ContinuedFractionState continued_fraction(const IrrationalParameter& theta, int depth) {
  if (depth < 1) throw DomainError("continued_fraction: depth must be >= 1");
  ContinuedFractionState st;
  if (theta.kind() == IrrationalParameter::Kind::partial_quotients) {
    for (int i = 0; i < depth; ++i) st.quotients.emplace_back(static_cast<long>(theta.stream_quotient(i)));
    st.convergents = convergents_of(st.quotients);
    return st;
  }
  int max_bits = kMaxPrecisionBits;
  if (const auto* lit = std::get_if<DecimalLiteral>(&theta.repr())) max_bits = lit->bits;
  int start = std::min(std::max(default_precision_bits(), 2 * depth + 64), max_bits);
  std::vector<mpz_class> best;
  for (int bits = start;; bits = std::min(bits * 2, max_bits)) {
    const Enclosure e = theta.enclose(bits);
    auto q = common_prefix_cf(e.lo().to_rational(), e.hi().to_rational(), depth);
    if (q.size() > best.size()) best = std::move(q);
    if (static_cast<int>(best.size()) >= depth) break;
    if (bits >= max_bits) {
      throw PrecisionExhausted("continued_fraction: only " + std::to_string(best.size()) +
                                   " quotients certified at " + std::to_string(bits) + " bits",
                               static_cast<int>(best.size()));
    }
  }
  st.quotients = std::move(best);
  st.convergents = convergents_of(st.quotients);
  return st;
}

// ---------------------------------------------------------------------------
// Approximation type diagnostics

double dist_qtheta(const Enclosure& theta, HalfIntegerQ q) {
  Enclosure x = theta.mul(q.twice);
  // Halving is exact in binary.
  mpfr_div_2ui(x.lo().get(), x.lo().get(), 1, MPFR_RNDD);
  mpfr_div_2ui(x.hi().get(), x.hi().get(), 1, MPFR_RNDU);
  return dist_to_int(x);
}

namespace {

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

int theta_bits_for(const IrrationalParameter& theta) {
  if (const auto* lit = std::get_if<DecimalLiteral>(&theta.repr())) return lit->bits;
  return default_precision_bits();
}

}  // namespace

TypeEstimate estimate_type(const IrrationalParameter& theta, std::int64_t q_max) {
  if (q_max < 10) throw DomainError("estimate_type: q_max must be >= 10");
  const Enclosure th = theta.enclose(theta_bits_for(theta));
  TypeEstimate out;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> lx, ly;
  for (std::int64_t twice = 2; twice <= 2 * q_max; ++twice) {
    if (twice == 1) continue;
    const HalfIntegerQ q{twice};
    if (q.value() < 1.0) continue;
    const double d = dist_qtheta(th, q);
    const double qv = q.value();
    if (qv >= 2.0 && d > 0) {
      const double r = -std::log(d) / std::log(qv);
      if (r > out.raw_sup) {
        out.raw_sup = r;
        out.raw_sup_witness = qv;
      }
    }
    if (d < best) {
      best = d;
      out.record_q.push_back(qv);
      if (qv >= 10.0 && d > 0) {
        lx.push_back(std::log(qv));
        ly.push_back(-std::log(d));
      }
    }
  }
  if (lx.size() < 2) {
    lx.clear();
    ly.clear();
    for (double qv : out.record_q) {
      if (qv < 2.0) continue;
      lx.push_back(std::log(qv));
      ly.push_back(-std::log(dist_qtheta(th, HalfIntegerQ{static_cast<std::int64_t>(2 * qv)})));
    }
  }
  out.estimate = ls_slope(lx, ly);
  return out;
}

QThetaBoundReport check_qtheta_lower_bound(const IrrationalParameter& theta, double gamma,
                                           double epsilon, std::int64_t q_max) {
  if (!(gamma > 0.0)) throw DomainError("check_qtheta_lower_bound: gamma must be positive");
  if (!(epsilon >= 0.0)) throw DomainError("check_qtheta_lower_bound: epsilon must be >= 0");
  if (q_max < 2) throw DomainError("check_qtheta_lower_bound: q_max must be >= 2");
  const Enclosure th = theta.enclose(theta_bits_for(theta));
  const double expo = gamma + epsilon;
  QThetaBoundReport out;
  out.min_ratio = out.min_ratio_integer = out.min_ratio_half = std::numeric_limits<double>::infinity();
  const int ranges = static_cast<int>(std::floor(std::log2(static_cast<double>(q_max)))) + 1;
  out.dyadic_minima.assign(static_cast<std::size_t>(ranges), std::numeric_limits<double>::infinity());
  for (std::int64_t twice = 2; twice <= 2 * q_max; ++twice) {
    const HalfIntegerQ q{twice};
    if (twice == 1) continue;
    const double qv = q.value();
    const double ratio = dist_qtheta(th, q) * std::pow(qv, expo);
    if (ratio < out.min_ratio) {
      out.min_ratio = ratio;
      out.witness_q = qv;
    }
    if (q.is_integer()) {
      if (ratio < out.min_ratio_integer) {
        out.min_ratio_integer = ratio;
        out.witness_integer = qv;
      }
    } else if (ratio < out.min_ratio_half) {
      out.min_ratio_half = ratio;
      out.witness_half = qv;
    }
    // range k holds q in (2^k, 2^(k+1)], with q = 1 in range 0
    int k = qv <= 2.0 ? 0 : static_cast<int>(std::ceil(std::log2(qv))) - 1;
    k = std::clamp(k, 0, ranges - 1);
    out.dyadic_minima[static_cast<std::size_t>(k)] =
        std::min(out.dyadic_minima[static_cast<std::size_t>(k)], ratio);
  }
  std::vector<double> lx, ly;
  for (int k = 1; k < ranges; ++k) {
    const double m = out.dyadic_minima[static_cast<std::size_t>(k)];
    if (std::isfinite(m) && m > 0) {
      lx.push_back(std::log(std::ldexp(1.0, k + 1)));
      ly.push_back(std::log(m));
    }
  }
  out.trend_slope = lx.size() >= 2 ? ls_slope(lx, ly) : 0.0;
  out.holds = out.min_ratio > 0.0 && out.trend_slope >= kQThetaTrendFloor;
  return out;
}

}  // namespace hw
