#pragma once

// Brute-force reference implementations for the unit tests. Deliberately
// naive: tuple-by-tuple loops, long double arithmetic, no shared code with
// the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kSqrt2 = 1.414213562373095048801688724209698079L;
constexpr long double kGolden = 1.618033988749894848204586834365638118L;

/// #{(n_1..n_l) >= 0 : Σ(2n_j+1) = k}
inline std::int64_t compositions(std::int64_t k, int l) {
  if (l == 0) return k == 0 ? 1 : 0;
  std::int64_t c = 0;
  for (std::int64_t n = 0; 2 * n + 1 <= k; ++n) c += compositions(k - 2 * n - 1, l - 1);
  return c;
}

/// #{v ∈ ℤ^dim : |v|² = n}
inline std::int64_t r_squares(int dim, std::int64_t n) {
  if (dim == 0) return n == 0 ? 1 : 0;
  std::int64_t c = 0;
  for (std::int64_t a = 0; a * a <= n; ++a) c += (a == 0 ? 1 : 2) * r_squares(dim - 1, n - a * a);
  return c;
}

struct Eigen {
  long double lambda;
  std::int64_t mult;
};

/// Every eigenvalue <= t_max, one entry per (m, n_1..n_l) tuple or torus vector.
inline std::vector<Eigen> spectrum(int l, long double theta, long double t_max) {
  std::vector<Eigen> out;
  // torus: every v ∈ ℤ^2l with 4π²|v|² <= t_max
  const auto R = static_cast<std::int64_t>(std::sqrt(t_max) / (2 * kPi)) + 1;
  std::vector<std::int64_t> v(static_cast<std::size_t>(2 * l), -R);
  for (;;) {
    std::int64_t n = 0;
    for (auto c : v) n += c * c;
    const long double lam = 4 * kPi * kPi * static_cast<long double>(n);
    if (lam <= t_max) out.push_back({lam, 1});
    std::size_t i = 0;
    while (i < v.size() && ++v[i] > R) v[i++] = -R;
    if (i == v.size()) break;
  }
  // Heisenberg part: 2π m (θm + Σ(2n_j+1)), multiplicity 2m^l per tuple
  for (std::int64_t m = 1; 2 * kPi * (theta * m * m + m * l) <= t_max; ++m) {
    std::vector<std::int64_t> n(static_cast<std::size_t>(l), 0);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t k) {
      if (i == n.size()) {
        const long double lam = 2 * kPi * (theta * m * m + static_cast<long double>(m) * k);
        if (lam <= t_max) {
          std::int64_t mult = 2;
          for (int q = 0; q < l; ++q) mult *= m;
          out.push_back({lam, mult});
        }
        return;
      }
      for (std::int64_t a = 0; 2 * kPi * (theta * m * m + m * (k + 2 * a + 1)) <= t_max; ++a) rec(i + 1, k + 2 * a + 1);
    };
    rec(0, 0);
  }
  std::sort(out.begin(), out.end(), [](const Eigen& a, const Eigen& b) { return a.lambda < b.lambda; });
  return out;
}

inline std::int64_t count(const std::vector<Eigen>& spec, long double t) {
  std::int64_t n = 0;
  for (const auto& e : spec)
    if (e.lambda <= t) n += e.mult;
  return n;
}

inline long double weyl_coefficient(int l, long double theta) {
  const int n = 2 * l + 1;
  const long double volB = std::pow(kPi, n / 2.0L) / std::tgamma(n / 2.0L + 1);
  return volB * std::sqrt(2 * kPi / theta) / std::pow(2 * kPi, n);
}

inline long double psi(long double t) { return t - std::floor(t) - 0.5L; }

inline long double alpha(long double theta, std::int64_t h1, std::int64_t h2, std::int64_t n1, std::int64_t n2) {
  return std::sqrt(h1 * (2 * n1 - theta * h1)) - std::sqrt(h2 * (2 * n2 - theta * h2));
}

/// Solutions of |α| <= Δ over h_i ∈ (H_i, 2H_i], n_i ∈ (N_i, 2N_i], n_i > θh_i.
inline std::int64_t gap_count(long double theta, std::int64_t H1, std::int64_t H2, std::int64_t N1, std::int64_t N2,
                              long double delta) {
  std::int64_t c = 0;
  for (std::int64_t h1 = H1 + 1; h1 <= 2 * H1; ++h1)
    for (std::int64_t h2 = H2 + 1; h2 <= 2 * H2; ++h2)
      for (std::int64_t n1 = N1 + 1; n1 <= 2 * N1; ++n1)
        for (std::int64_t n2 = N2 + 1; n2 <= 2 * N2; ++n2) {
          if (n1 <= theta * h1 || n2 <= theta * h2) continue;
          c += std::fabs(alpha(theta, h1, h2, n1, n2)) <= delta;
        }
  return c;
}

/// ∫_a^b f by composite Simpson with n (even) panels.
template <class F>
long double simpson(F&& f, long double a, long double b, int n) {
  const long double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
  return s * h / 3;
}

}  // namespace oracle
