#pragma once

// Mean square of the Weyl remainder: exact piecewise integration over the
// eigenvalue step function, the series constant 𝒞_{l,θ}, the predicted
// leading constant, log-log fitting and the parameter map for a general
// torus metric h (l = 1).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hw/spectrum.hpp"

namespace hw {

struct IntegralValue {
  long double value = 0.0L;
  long double error_bound = 0.0L;  // rounding plus eigenvalue-position uncertainty
};

/// ∫_a^b (N(t) - A t^(l+1/2))² dt over a precomputed jump table, evaluated in
/// closed form on each interval between consecutive jumps (binary128).
class MeanSquareIntegrator {
 public:
  MeanSquareIntegrator(const ManifoldConfig& cfg, JumpTable jumps);
  MeanSquareIntegrator(const ManifoldConfig& cfg, double t_max);

  IntegralValue integral(double a, double b) const;
  /// ∫_1^T for each T of a sorted list, in one pass.
  std::vector<IntegralValue> ladder(const std::vector<double>& Ts) const;
  const JumpTable& jumps() const { return jumps_; }

 private:
  ManifoldConfig cfg_;
  JumpTable jumps_;
  __float128 A_;
};

IntegralValue integrate_R_squared(const ManifoldConfig& cfg, double T);

struct CValue {
  long double value = 0.0L;
  long double tail_bound = 0.0L;  // certified |𝒞 - value|
  std::int64_t H0 = 0;
  int direct_terms = 0;
  int em_order = 0;
};

struct CReport {
  CValue primary;
  CValue secondary;  // an independent truncation schedule
  long double relative_disagreement = 0.0L;
};

/// 𝒞_{l,θ} = Σ_{h>=1} Σ_{r>θh} (1 - θh/(2r-θh))^(2l-2) / (h^(1/2) (2r-θh)^(5/2))
CReport compute_C(const ManifoldConfig& cfg, double target_eps);

/// One schedule: h <= H0 summed with K direct terms per row and an
/// Euler-Maclaurin tail of even order p; the h-tail is added analytically.
CValue compute_C_schedule(const ManifoldConfig& cfg, std::int64_t H0, int K, int p);

/// Upper bound on 𝒞 minus the truncated sum over h <= H, r <= θh(2^(2J+1)+1/2).
long double c_tail_bound(const ManifoldConfig& cfg, std::int64_t H, int J);

/// 2^(9/2-4l) C / ((4l+1) (l-1)!² π^(2l+3/2))
long double theoretical_constant(int l, long double C);

/// (4γ+1) / (8γ+4)
double error_exponent(double gamma);

struct PowerFit {
  double exponent = 0.0;
  double constant = 0.0;  // exp(intercept)
};

PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

std::vector<double> geometric_ladder(double a, double b, int n);

struct MeanSquareReport {
  std::vector<double> T;
  std::vector<long double> I;
  std::vector<long double> I_error;
  double fitted_exponent = 0.0;  // smallest ladder point excluded
  double fitted_constant = 0.0;  // I(T_top) / T_top^(2l+1/2)
  double theoretical_exponent = 0.0;
  long double theoretical_constant = 0.0L;
  long double C = 0.0L;
  long double C_tail_bound = 0.0L;
  std::optional<double> error_exponent;  // needs a declared γ
  double constant_ratio = 0.0;
};

MeanSquareReport fit_mean_square(const ManifoldConfig& cfg, const std::vector<double>& ladder,
                                 double c_eps = 1e-8);

struct Theorem2Config {
  double h11 = 1.0;
  double h12 = 0.0;
  double h22 = 1.0;
  double g3 = 1.0;
  bool theta_rational = false;  // declared by the caller
};

struct Theorem2Map {
  double det = 0.0;
  double d = 0.0;
  double d2 = 0.0;             // 1/√det
  std::string theta_decimal;   // θ = 2π/(g3 d²), 60 digits
  std::optional<ManifoldConfig> manifold;  // absent for rational θ
  double constant_scale = 0.0;             // d^-3
  std::string remark;
};

Theorem2Map theorem2_map(const Theorem2Config& cfg);

/// Throws ModeError for a rational-θ map.
const ManifoldConfig& require_irrational(const Theorem2Map& map);

/// 2^(1/2) 𝒞_{1,θ} / (5 d³ π^(7/2))
long double theorem2_constant(const Theorem2Map& map, long double C);

}  // namespace hw
