#pragma once

// Scalar kernel: the metric parameter θ, certified enclosures of it, the
// sawtooth ψ, the distance to the nearest integer, e(t), continued fractions
// and approximation-type diagnostics.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hw/bigfloat.hpp"
#include "hw/error.hpp"

namespace hw {

inline constexpr int kMinPrecisionBits = 64;
inline constexpr int kDefaultPrecisionBits = 192;
inline constexpr int kMaxPrecisionBits = 1 << 14;

/// 192 unless HW_PRECISION_BITS is set to an integer >= 64.
int default_precision_bits();

/// (p + q·√d) / s
struct QuadraticSurd {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::int64_t s = 1;
  std::int64_t d = 2;
};

enum class ContinuationRule { periodic, constant };

/// [a0; a1, a2, ...]. `periodic` repeats prefix[1..] forever, `constant`
/// repeats the last entry forever.
struct PartialQuotients {
  std::vector<std::int64_t> prefix;
  ContinuationRule rule = ContinuationRule::constant;
};

/// A decimal literal known to within 2^-bits (absolute).
struct DecimalLiteral {
  std::string decimal;
  int bits = 64;
};

class IrrationalParameter {
 public:
  enum class Kind { quadratic_surd, partial_quotients, literal };

  static IrrationalParameter quadratic_surd(std::int64_t p, std::int64_t q, std::int64_t s,
                                            std::int64_t d);
  static IrrationalParameter partial_quotients(std::vector<std::int64_t> prefix,
                                               ContinuationRule rule);
  static IrrationalParameter literal(std::string decimal, int bits);

  static IrrationalParameter sqrt2() { return quadratic_surd(0, 1, 1, 2); }
  static IrrationalParameter golden() { return quadratic_surd(1, 1, 2, 5); }

  Kind kind() const;
  const std::variant<QuadraticSurd, PartialQuotients, DecimalLiteral>& repr() const { return repr_; }

  /// Declared approximation type γ (defaults to 1 for quadratic surds).
  std::optional<double> declared_type() const;
  const std::string& type_note() const { return type_note_; }
  IrrationalParameter with_declared_type(double gamma, std::string note) const;

  /// Certified enclosure of width <= 2^(1-bits); bits >= 64.
  Enclosure enclose(int bits) const;

  /// Nearest double / long double and a bound on |θ - approx|.
  double approx() const { return approx_; }
  long double approx_ld() const { return approx_ld_; }
  double approx_error() const { return approx_err_; }

  /// Partial quotient a_i of the stream (partial-quotient kind only).
  std::int64_t stream_quotient(std::size_t i) const;

  std::string describe() const;

 private:
  using Repr = std::variant<QuadraticSurd, PartialQuotients, DecimalLiteral>;
  explicit IrrationalParameter(Repr repr);
  void cache_approx();

  Repr repr_;
  std::optional<double> gamma_;
  std::string type_note_;
  double approx_ = 0.0;
  long double approx_ld_ = 0.0L;
  double approx_err_ = 0.0;
};

/// eval_theta: enclosure of θ at the requested precision.
Enclosure eval_theta(const IrrationalParameter& theta, int precision_bits);

struct PsiValue {
  double value = 0.0;     // in [-1/2, 1/2)
  bool boundary = false;  // enclosure straddles (or touches) an integer
};

/// ψ(t) = {t} - 1/2 evaluated at the enclosure midpoint.
PsiValue psi(const Enclosure& t);
/// ψ of an exactly representable double.
double psi(double t);
long double psi(long double t);

/// ‖t‖ = min({t}, 1 - {t}).
double dist_to_int(const Enclosure& t);
double dist_to_int(double t);

/// e(t) = exp(2πit) with the argument reduced mod 1 first.
std::complex<double> unit_phase(long double t);

struct Convergent {
  mpz_class p;
  mpz_class q;
};

struct ContinuedFractionState {
  std::vector<mpz_class> quotients;
  std::vector<Convergent> convergents;
};

/// Thrown when the enclosure cannot certify the requested number of quotients.
class PrecisionExhausted : public PrecisionError {
 public:
  PrecisionExhausted(const std::string& what, int max_certified_depth)
      : PrecisionError(what), max_certified_depth_(max_certified_depth) {}
  int max_certified_depth() const { return max_certified_depth_; }

 private:
  int max_certified_depth_;
};

/// First `depth` partial quotients and convergents, certified by enclosure.
ContinuedFractionState continued_fraction(const IrrationalParameter& theta, int depth);

/// Convergents of an explicit quotient list (no certification involved).
std::vector<Convergent> convergents_of(const std::vector<mpz_class>& quotients);

/// q ranges over ℕ ∪ (ℕ + 1/2); stored doubled so every q is an integer.
struct HalfIntegerQ {
  std::int64_t twice = 2;
  double value() const { return static_cast<double>(twice) / 2.0; }
  bool is_integer() const { return twice % 2 == 0; }
};

/// ‖qθ‖ for q = twice/2, evaluated from a certified enclosure.
double dist_qtheta(const Enclosure& theta, HalfIntegerQ q);

struct TypeEstimate {
  double estimate = 0.0;         // slope of -log‖qθ‖ vs log q over best-approximation records
  double raw_sup = 0.0;          // sup of -log‖qθ‖ / log q over all sampled q >= 2
  double raw_sup_witness = 0.0;  // the q attaining raw_sup
  std::vector<double> record_q;  // best-approximation records used by the fit
};

/// Empirical approximation type from all q <= q_max (q_max >= 10).
TypeEstimate estimate_type(const IrrationalParameter& theta, std::int64_t q_max);

struct QThetaBoundReport {
  bool holds = false;
  double min_ratio = 0.0;  // min of ‖qθ‖·q^(γ+ε) over all sampled q
  double witness_q = 0.0;
  double min_ratio_integer = 0.0;
  double witness_integer = 0.0;
  double min_ratio_half = 0.0;
  double witness_half = 0.0;
  std::vector<double> dyadic_minima;  // per (2^k, 2^(k+1)]
  double trend_slope = 0.0;           // d log(min) / d log q across dyadic ranges
};

/// Slope below which the dyadic minima count as vanishing.
inline constexpr double kQThetaTrendFloor = -0.1;

QThetaBoundReport check_qtheta_lower_bound(const IrrationalParameter& theta, double gamma,
                                           double epsilon, std::int64_t q_max);

}  // namespace hw
