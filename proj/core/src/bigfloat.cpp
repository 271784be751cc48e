#include "hw/bigfloat.hpp"

#include <cmath>
#include <vector>

#include "hw/error.hpp"

namespace hw {

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

mpq_class BigFloat::to_rational() const {
  if (!mpfr_number_p(value_)) throw DomainError("to_rational: non-finite value");
  mpq_class q;
  if (mpfr_zero_p(value_)) return q;
  mpz_class mant;
  const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), value_);
  q = mant;
  if (e > 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  q.canonicalize();
  return q;
}

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  const std::string fmt = "%." + std::to_string(digits - 1) + "R*e";
  mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), rnd, value_);
  return std::string(buf.data());
}

// ---------------------------------------------------------------------------

Enclosure::Enclosure(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

Enclosure Enclosure::point(double v, mpfr_prec_t prec) {
  Enclosure e(prec);
  mpfr_set_d(e.lo_.get(), v, MPFR_RNDD);
  mpfr_set_d(e.hi_.get(), v, MPFR_RNDU);
  return e;
}

Enclosure Enclosure::integer(std::int64_t v, mpfr_prec_t prec) {
  Enclosure e(prec);
  mpfr_set_sj(e.lo_.get(), v, MPFR_RNDD);
  mpfr_set_sj(e.hi_.get(), v, MPFR_RNDU);
  return e;
}

Enclosure Enclosure::integer(const mpz_class& v, mpfr_prec_t prec) {
  Enclosure e(prec);
  mpfr_set_z(e.lo_.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(e.hi_.get(), v.get_mpz_t(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::rational(const mpq_class& v, mpfr_prec_t prec) {
  Enclosure e(prec);
  mpfr_set_q(e.lo_.get(), v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(e.hi_.get(), v.get_mpq_t(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::pi(mpfr_prec_t prec) {
  Enclosure e(prec);
  mpfr_const_pi(e.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(e.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::from_bounds(const BigFloat& lo, const BigFloat& hi) {
  Enclosure e(std::max(lo.precision(), hi.precision()));
  mpfr_set(e.lo_.get(), lo.get(), MPFR_RNDD);
  mpfr_set(e.hi_.get(), hi.get(), MPFR_RNDU);
  if (mpfr_greater_p(e.lo_.get(), e.hi_.get())) throw DomainError("enclosure: lo > hi");
  return e;
}

double Enclosure::mid_double() const { return static_cast<double>(mid_long_double()); }

long double Enclosure::mid_long_double() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m.to_long_double();
}

BigFloat Enclosure::width() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

double Enclosure::log2_width() const {
  const BigFloat w = width();
  if (mpfr_zero_p(w.get())) return -INFINITY;
  long exp = 0;
  const double m = mpfr_get_d_2exp(&exp, w.get(), MPFR_RNDU);
  return std::log2(m) + static_cast<double>(exp);
}

bool Enclosure::contains_zero() const {
  return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

bool Enclosure::contains_integer() const {
  BigFloat c(precision());
  mpfr_ceil(c.get(), lo_.get());
  return mpfr_lessequal_p(c.get(), hi_.get());
}

std::optional<mpz_class> Enclosure::certified_floor() const {
  BigFloat fl(precision());
  BigFloat fh(precision());
  mpfr_floor(fl.get(), lo_.get());
  mpfr_floor(fh.get(), hi_.get());
  if (!mpfr_equal_p(fl.get(), fh.get())) return std::nullopt;
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), fl.get(), MPFR_RNDN);
  return z;
}

Enclosure Enclosure::frac() const {
  auto fl = certified_floor();
  if (!fl) throw PrecisionError("frac: enclosure straddles an integer");
  return *this - integer(*fl, precision());
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  Enclosure r(std::max(a.precision(), b.precision()));
  mpfr_add(r.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(r.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  Enclosure r(std::max(a.precision(), b.precision()));
  mpfr_sub(r.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(r.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& a) {
  Enclosure r(a.precision());
  mpfr_neg(r.lo_.get(), a.hi_.get(), MPFR_RNDD);
  mpfr_neg(r.hi_.get(), a.lo_.get(), MPFR_RNDU);
  return r;
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  const mpfr_prec_t p = std::max(a.precision(), b.precision());
  Enclosure r(p);
  BigFloat t(p);
  const mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
  const mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.contains_zero()) throw DomainError("enclosure division by an interval containing 0");
  const mpfr_prec_t p = std::max(a.precision(), b.precision());
  Enclosure r(p);
  BigFloat t(p);
  const mpfr_srcptr as[2] = {a.lo_.get(), a.hi_.get()};
  const mpfr_srcptr bs[2] = {b.lo_.get(), b.hi_.get()};
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

Enclosure Enclosure::add(std::int64_t v) const { return *this + integer(v, precision()); }

Enclosure Enclosure::mul(std::int64_t v) const {
  Enclosure r(precision());
  if (v >= 0) {
    mpfr_mul_si(r.lo_.get(), lo_.get(), static_cast<long>(v), MPFR_RNDD);
    mpfr_mul_si(r.hi_.get(), hi_.get(), static_cast<long>(v), MPFR_RNDU);
  } else {
    mpfr_mul_si(r.lo_.get(), hi_.get(), static_cast<long>(v), MPFR_RNDD);
    mpfr_mul_si(r.hi_.get(), lo_.get(), static_cast<long>(v), MPFR_RNDU);
  }
  return r;
}

Enclosure Enclosure::div(std::int64_t v) const {
  if (v == 0) throw DomainError("enclosure division by zero");
  Enclosure r(precision());
  if (v > 0) {
    mpfr_div_si(r.lo_.get(), lo_.get(), static_cast<long>(v), MPFR_RNDD);
    mpfr_div_si(r.hi_.get(), hi_.get(), static_cast<long>(v), MPFR_RNDU);
  } else {
    mpfr_div_si(r.lo_.get(), hi_.get(), static_cast<long>(v), MPFR_RNDD);
    mpfr_div_si(r.hi_.get(), lo_.get(), static_cast<long>(v), MPFR_RNDU);
  }
  return r;
}

Enclosure Enclosure::sqrt() const {
  if (mpfr_sgn(lo_.get()) < 0) throw DomainError("enclosure sqrt of a possibly negative value");
  Enclosure r(precision());
  mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
  return r;
}

Enclosure Enclosure::abs() const {
  if (mpfr_sgn(lo_.get()) >= 0) return *this;
  if (mpfr_sgn(hi_.get()) <= 0) return -*this;
  Enclosure r(precision());
  mpfr_set_zero(r.lo_.get(), 1);
  if (mpfr_cmpabs(lo_.get(), hi_.get()) > 0) {
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
  } else {
    mpfr_set(r.hi_.get(), hi_.get(), MPFR_RNDU);
  }
  return r;
}

std::optional<int> Enclosure::compare(const Enclosure& a, const Enclosure& b) {
  if (mpfr_less_p(a.hi_.get(), b.lo_.get())) return -1;
  if (mpfr_greater_p(a.lo_.get(), b.hi_.get())) return 1;
  return std::nullopt;
}

}  // namespace hw
