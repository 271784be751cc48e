#pragma once

// Dyadic exponential sums
//   S(x; h, j1, j) = Σ_{m ∈ (M 2^-j-1, M 2^-j]} x^(l-1-j1) m^(2j1+1) e(-h(x/2m - θm/2)),  M = √(x/θ)
// their stationary-phase transforms, and the oscillating series R11(x, H).

#include <complex>
#include <cstdint>
#include <vector>

#include "hw/spectrum.hpp"

namespace hw {

/// J = ⌊(L - log L) / (2 log 2)⌋ with L = log T.
int dyadic_cap(double T);

struct DyadicBlock {
  int j = 0;
  std::int64_t m_lo = 1;  // first integer in the block
  std::int64_t m_hi = 0;  // last integer (m_hi < m_lo when empty)
  long double a = 0.0L;   // M 2^(-j-1)
  long double b = 0.0L;   // M 2^(-j)
};

DyadicBlock dyadic_block(const ManifoldConfig& cfg, double x, int j);

/// β(h, j) = θh(2^(2j-1) + 1/2) as a certified enclosure.
Enclosure beta_endpoint(const IrrationalParameter& theta, std::int64_t h, int j, int bits);

std::complex<long double> direct_S(const ManifoldConfig& cfg, double x, std::int64_t h, int j1, int j);

/// Frozen multipliers for the three error terms.
struct EnvelopeConstants {
  double log_term = 1.0;       // G log(β - α + 2)
  double length_term = 1.0;    // G (b - a + R)(1/U + 1/U1)
  double endpoint_term = 1.0;  // G min(√R, max(1/<α>, 1/<β>))
};

struct TransformReport {
  std::complex<long double> direct;
  std::complex<long double> transformed;
  double envelope = 0.0;
  double e_log = 0.0;  // unscaled components
  double e_length = 0.0;
  double e_endpoint = 0.0;
  double alpha = 0.0;  // r-range (α, β]
  double beta = 0.0;
  std::int64_t r_lo = 0;
  std::int64_t r_hi = -1;
  bool endpoint_flagged = false;  // α or β could not be separated from an integer
  std::int64_t m_count = 0;
};

TransformReport transformed_S(const ManifoldConfig& cfg, double x, std::int64_t h, int j1, int j,
                              const EnvelopeConstants& k);

/// |(f(m_r) - r m_r) + √(xh(2r - θh))| / √(xh(2r - θh)) at the given precision,
/// with f(m) = -h(x/2m - θm/2) and m_r = √(hx / (2r - θh)).
double stationary_phase_defect(const ManifoldConfig& cfg, double x, std::int64_t h, std::int64_t r, int bits);

/// F(x; j1) assembled from the two conjugate halves over 1 <= h <= H, 0 <= j <= J.
std::complex<long double> assemble_F(const ManifoldConfig& cfg, double x, std::int64_t H, int j1, int J);

/// u(h, r) = e(lh/2) (1 - θh/(2r-θh))^(l-1) / (h^(1/4) (2r-θh)^(5/4)); always real.
long double voronoi_u(const ManifoldConfig& cfg, std::int64_t h, std::int64_t r);

struct R11Options {
  double H = 0.0;                 // 0 means T²
  double relative_floor = 1e-4;   // drop |u| below floor × max |u|
};

class R11Series {
 public:
  R11Series(const ManifoldConfig& cfg, double T, const R11Options& opt = {});

  long double evaluate(double x) const;
  std::size_t terms() const { return hn_.size(); }
  int J() const { return J_; }
  double H() const { return H_; }
  /// Bounds on what the floor discarded, in units of the prefactor
  /// 2^(2-l) x^(l-1/4) / ((l-1)! π):  Σ|u| and Σu² over dropped terms.
  double dropped_abs_bound() const { return dropped_abs_; }
  double dropped_sq_bound() const { return dropped_sq_; }
  double floor_abs() const { return floor_abs_; }

 private:
  ManifoldConfig cfg_;
  double T_;
  double H_;
  int J_;
  std::vector<long double> hn_;  // h (2r - θh)
  std::vector<long double> u_;
  double dropped_abs_ = 0.0;
  double dropped_sq_ = 0.0;
  double floor_abs_ = 0.0;
};

long double r11(const ManifoldConfig& cfg, double x, double T, const R11Options& opt = {});

/// Σ_{h<=H} Σ_{θh<r<=θh(2^(2J+1)+1/2)} h^(-1/2) (2r-θh)^(-5/2) (1 - θh/(2r-θh))^(2l-2)
long double diagonal_constant_extract(const ManifoldConfig& cfg, std::int64_t H, int J);

}  // namespace hw
