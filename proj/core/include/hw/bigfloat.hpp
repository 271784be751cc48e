#pragma once

// Thin RAII layer over MPFR plus outward-rounded interval arithmetic.
//
// Every Enclosure operation rounds the lower endpoint toward -inf and the
// upper endpoint toward +inf, so the true value of any expression built from
// exact inputs stays inside the result.

#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace hw {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  long double to_long_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_ld(value_, rnd); }

  /// Exact conversion of the (finite) binary value to a rational.
  mpq_class to_rational() const;

  /// Decimal rendering with `digits` significant digits.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;

 private:
  mpfr_t value_;
};

class Enclosure {
 public:
  explicit Enclosure(mpfr_prec_t prec = 64);

  /// Exact point enclosure of a double / integer / rational (rational rounded outward).
  static Enclosure point(double v, mpfr_prec_t prec);
  static Enclosure integer(std::int64_t v, mpfr_prec_t prec);
  static Enclosure integer(const mpz_class& v, mpfr_prec_t prec);
  static Enclosure rational(const mpq_class& v, mpfr_prec_t prec);
  static Enclosure pi(mpfr_prec_t prec);
  static Enclosure from_bounds(const BigFloat& lo, const BigFloat& hi);

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  BigFloat& lo() { return lo_; }
  BigFloat& hi() { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  double lo_double() const { return lo_.to_double(MPFR_RNDD); }
  double hi_double() const { return hi_.to_double(MPFR_RNDU); }
  double mid_double() const;
  long double mid_long_double() const;
  /// hi - lo, rounded up.
  BigFloat width() const;
  /// log2 of the width (-inf for a point).
  double log2_width() const;

  bool contains_zero() const;
  bool strictly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool strictly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
  /// True iff some integer k satisfies lo <= k <= hi.
  bool contains_integer() const;
  /// floor(x) for every x in the enclosure, when it is unique.
  std::optional<mpz_class> certified_floor() const;

  /// Fractional-part enclosure; valid only when certified_floor() exists.
  Enclosure frac() const;

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a);

  Enclosure add(std::int64_t v) const;
  Enclosure mul(std::int64_t v) const;
  Enclosure div(std::int64_t v) const;
  Enclosure sqrt() const;
  Enclosure abs() const;

  /// Certified comparison: -1 / +1 when the enclosures are disjoint, nullopt otherwise.
  static std::optional<int> compare(const Enclosure& a, const Enclosure& b);

 private:
  BigFloat lo_;
  BigFloat hi_;
};

/// Repeats `attempt(bits)` with doubling precision until it yields a value.
/// Returns nullopt when `max_bits` is exhausted.
template <class F>
auto escalate(mpfr_prec_t start_bits, mpfr_prec_t max_bits, F&& attempt)
    -> decltype(attempt(start_bits)) {
  for (mpfr_prec_t bits = start_bits; bits <= max_bits; bits *= 2) {
    if (auto r = attempt(bits)) return r;
  }
  return {};
}

}  // namespace hw
