#pragma once

// The gap α(θ; h1, h2, n1, n2) = √(h1(2n1 - θh1)) - √(h2(2n2 - θh2)),
// exhaustive counting of small gaps over dyadic boxes, and empirical lower
// bounds for nonzero gaps.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hw/kernel.hpp"

namespace hw {

struct AlphaValue {
  long double value = 0.0L;
  bool exact_zero = false;  // certified α = 0 (only when h1 = h2 and n1 = n2)
  int sign = 0;             // certified sign
};

AlphaValue alpha(const IrrationalParameter& theta, std::int64_t h1, std::int64_t h2, std::int64_t n1,
                 std::int64_t n2);

/// Dyadic box h_i ∈ (H_i, 2H_i], n_i ∈ (N_i, 2N_i], with n_i > θh_i.
struct BoxSpec {
  std::int64_t H1 = 2, H2 = 2, N1 = 2, N2 = 2;
  double delta = 0.1;
  void validate() const;
  /// Δ (H1H2N1N2)^(3/4) + (H1H2N1N2)^(1/2) log²(H1H2N1N2)
  double bound() const;
};

using Tuple4 = std::array<std::int64_t, 4>;  // h1, h2, n1, n2

struct GapStatistics {
  std::int64_t count = 0;
  double bound = 0.0;
  std::optional<double> min_alpha_nonzero;  // over counted solutions
  Tuple4 min_alpha_witness{};
  std::int64_t diagonal_count = 0;
  std::int64_t admissible = 0;  // tuples in the box satisfying n_i > θh_i
  std::int64_t examined = 0;    // tuples passed to the certified test
  std::int64_t unresolved = 0;  // |α| indistinguishable from Δ; counted
};

enum class ScanMode { pruned, unpruned };

struct ScanOptions {
  ScanMode mode = ScanMode::pruned;
  std::int64_t budget = 1'000'000'000;  // tuples examined
  double margin = 1e-9;
};

/// Thrown when the budget runs out; carries the sub-boxes finished so far.
class PartialResultError : public BudgetError {
 public:
  PartialResultError(const std::string& what, GapStatistics partial,
                     std::vector<std::pair<std::int64_t, std::int64_t>> completed)
      : BudgetError(what), partial_(std::move(partial)), completed_(std::move(completed)) {}
  const GapStatistics& partial() const { return partial_; }
  /// (h1, h2) pairs scanned completely
  const std::vector<std::pair<std::int64_t, std::int64_t>>& completed() const { return completed_; }

 private:
  GapStatistics partial_;
  std::vector<std::pair<std::int64_t, std::int64_t>> completed_;
};

GapStatistics count_solutions(const IrrationalParameter& theta, const BoxSpec& box, const ScanOptions& opt = {});

struct Lemma46Shell {
  std::int64_t h_max = 0;
  std::int64_t n_max = 0;
  std::optional<double> equal_h_min;
  Tuple4 equal_h_witness{};
  std::optional<double> distinct_h_min;
  Tuple4 distinct_h_witness{};
  std::optional<double> distinct_h_sharp_min;
  Tuple4 distinct_h_sharp_witness{};
};

struct Lemma46Report {
  std::optional<double> equal_h_min;  // min |α| (n1n2)^(1/4) / h^(1/2)
  Tuple4 equal_h_witness{};
  std::optional<double> distinct_h_min;  // min |α| (h1h2n1n2)^(1/4) (h1h2)^((γ+ε)/2)
  Tuple4 distinct_h_witness{};
  // same with |h1² - h2²|^(γ+ε) in place of (h1h2)^((γ+ε)/2), the form that
  // follows directly from ‖qθ‖ >> q^(-γ-ε)
  std::optional<double> distinct_h_sharp_min;
  Tuple4 distinct_h_sharp_witness{};
  std::vector<Lemma46Shell> shells;  // minima over each ladder step minus the previous one
  double equal_h_trend = 0.0;        // slope of log(shell min) vs log(h_max)
  double distinct_h_trend = 0.0;
  double distinct_h_sharp_trend = 0.0;
  std::int64_t scanned = 0;
  std::int64_t excluded = 0;  // failed the hypothesis 0 < |α| < β^(1/4)/10
  bool holds = false;  // equal-h and (h1h2)-normalized distinct-h minima
  bool sharp_holds = false;
};

/// Shell slopes below this count as a vanishing lower bound.
inline constexpr double kLemma46TrendFloor = -0.1;

/// Ladder: step s covers h <= h_max 2^(s-steps), n <= n_max 2^(s-steps), s = 1..steps.
Lemma46Report check_lemma46(const IrrationalParameter& theta, double gamma, double epsilon, std::int64_t h_max,
                            std::int64_t n_max, int steps = 4);

}  // namespace hw
