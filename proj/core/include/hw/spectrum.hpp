#pragma once

// Laplace spectrum of the (2l+1)-dimensional Heisenberg manifold with the
// metric diag(I_2l, 2π/θ), its counting function N(t) and the Weyl remainder.
//
//   Type I   λ = 4π²n             multiplicity r_2l(n)
//   Type II  λ = 2π(θm² + mk)     multiplicity 2m^l · C((k-l)/2 + l-1, l-1),
//                                 m >= 1, k >= l, k ≡ l (mod 2)

#include <cstdint>
#include <optional>
#include <vector>

#include "hw/kernel.hpp"

namespace hw {

struct ManifoldConfig {
  int l = 1;
  IrrationalParameter theta = IrrationalParameter::sqrt2();

  int dimension() const { return 2 * l + 1; }
  /// Weyl coefficient A in N(t) ~ A t^(l+1/2):  vol(B_n) √(2π/θ) / (2π)^n.
  long double weyl_coefficient() const;
  void validate() const;
};

/// Number of (n_1..n_l), n_j >= 0, with Σ(2n_j + 1) = k.
std::uint64_t composition_count(std::int64_t k, int l);

/// r_2l(n) for 0 <= n <= n_max. Throws BudgetError when n_max + 1 exceeds
/// max_entries; use r2l_shell_chunk in that case.
std::vector<std::int64_t> r2l_shell_histogram(int l, std::int64_t n_max,
                                              std::int64_t max_entries = std::int64_t{1} << 27);

/// r_2l(n) for n in [n0, n1), by direct enumeration of lattice points with
/// norm in the window. Needs O(n1 - n0) memory only.
std::vector<std::int64_t> r2l_shell_chunk(int l, std::int64_t n0, std::int64_t n1);

enum class LineSource { type_i, type_ii };

struct SpectralLine {
  double lambda_lo = 0.0;  // certified bounds on the eigenvalue
  double lambda_hi = 0.0;
  long double lambda = 0.0L;
  std::int64_t multiplicity = 0;
  LineSource source = LineSource::type_i;
  std::int64_t m = 0;  // Type II
  std::int64_t k = 0;  // Type II
  std::int64_t n = 0;  // Type I
};

/// Certified comparison of two lines (exact for distinct sources).
/// Throws PrecisionError when the order cannot be decided.
int compare_lines(const ManifoldConfig& cfg, const SpectralLine& a, const SpectralLine& b);

/// All eigenvalues <= t_max in ascending order.
std::vector<SpectralLine> enumerate_spectrum(const ManifoldConfig& cfg, double t_max);

struct CountingPoint {
  double t = 0.0;
  std::int64_t N = 0;
  long double main = 0.0L;
  long double R = 0.0L;
  bool boundary = false;  // t could not be separated from an eigenvalue
};

/// Evaluates N(t) by the closed-form lattice count, reusing one torus
/// table for all t <= t_max.
class SpectrumCounter {
 public:
  SpectrumCounter(ManifoldConfig cfg, double t_max);

  CountingPoint count(double t) const;
  const ManifoldConfig& config() const { return cfg_; }
  double t_max() const { return t_max_; }

 private:
  std::int64_t torus_cumulative(double t, bool& boundary) const;
  std::int64_t type_ii_count(double t, bool& boundary) const;

  ManifoldConfig cfg_;
  double t_max_;
  std::vector<std::int64_t> torus_cum_;
  long double weyl_;
};

CountingPoint count_N(const ManifoldConfig& cfg, double t);

/// Jump points of N on (0, t_max]: distinct eigenvalues with the value of N
/// just after each jump. Index 0 is λ = 0.
struct JumpTable {
  std::vector<long double> lambda;
  std::vector<std::int64_t> N_after;
  double t_max = 0.0;
};

JumpTable build_jump_table(const ManifoldConfig& cfg, double t_max);

}  // namespace hw
