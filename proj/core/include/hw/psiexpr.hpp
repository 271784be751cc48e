#pragma once

// The ψ-sum expression of R(2πx), trigonometric approximations of ψ with
// their error envelopes, and the clamped reciprocal sum G(x, H).

#include <cstdint>
#include <optional>
#include <vector>

#include "hw/spectrum.hpp"

namespace hw {

/// Largest m >= 0 with θm² <= x (certified).
std::int64_t m_range_upper(const IrrationalParameter& theta, double x);

struct PsiSumValue {
  long double value = 0.0L;
  std::int64_t terms = 0;
  std::int64_t boundary_count = 0;
};

/// -(4 / (2^l (l-1)!)) Σ_{m <= √(x/θ)} m (x - θm²)^(l-1) ψ(x/2m - θm/2 - l/2)
PsiSumValue psi_sum_R(const ManifoldConfig& cfg, double x);

struct ResidualPoint {
  double x = 0.0;
  long double R_exact = 0.0L;  // R(2πx)
  long double psi_sum = 0.0L;
  long double residual = 0.0L;
  bool boundary = false;
};

struct ResidualProfile {
  std::vector<ResidualPoint> points;
  std::optional<double> slope;  // least squares of log|residual| vs log x
  std::int64_t boundary_count = 0;
};

ResidualProfile residual_profile(const ManifoldConfig& cfg, const std::vector<double>& xs);

/// n points log-spaced over [a, b].
std::vector<double> log_spaced(double a, double b, int n);

struct ExpansionReport {
  double value = 0.0;
  double envelope = 0.0;
  std::int64_t boundary_count = 0;
};

/// -Σ_{1<=|h|<=H} e(hu) / (2πih), with envelope min(1, 1/(H‖u‖)).
ExpansionReport truncated_fourier_psi(double u, double H);

/// Vaaler's trigonometric approximation of degree N = ⌊H⌋ with its
/// nonnegative Fejér majorant: |ψ(u) - value| <= envelope for all u.
ExpansionReport vaaler_psi(double u, double H);

struct VaalerCoefficients {
  int N = 0;
  std::vector<double> a_abs;  // |a(h)|, h = 1..N  (a(-h) = conj a(h))
  std::vector<double> b;      // b(h),   h = 0..N  (b(-h) = b(h))
  double max_h_a = 0.0;       // max_h |h a(h)|
  double max_H_b = 0.0;       // max_h H |b(h)|
};

VaalerCoefficients vaaler_coefficients(double H);

/// G(x, H) = Σ_{m <= √(x/θ)} min(1, 1/(H‖x/2m - θm/2 + l/2‖))
long double g_sum(const ManifoldConfig& cfg, double x, double H);

/// ∫_a^b G(x, H) dx, exact per m up to floating rounding.
long double g_integral(const ManifoldConfig& cfg, double a, double b, double H);

}  // namespace hw
