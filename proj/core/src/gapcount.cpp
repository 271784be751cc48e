#include "hw/gapcount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hw/parallel.hpp"

namespace hw {

namespace {

constexpr mpfr_prec_t kStartBits = 128;
constexpr mpfr_prec_t kMaxBits = 1024;

/// Smallest n with n > θh.
std::int64_t n_min(const IrrationalParameter& theta, std::int64_t h) {
  auto fl = escalate(kStartBits, kMaxBits, [&](mpfr_prec_t bits) -> std::optional<mpz_class> {
    return theta.enclose(static_cast<int>(bits)).mul(h).certified_floor();
  });
  if (!fl) throw PrecisionError("gapcount: cannot certify floor(θh)");
  return fl->get_si() + 1;
}

Enclosure radicand(const Enclosure& th, std::int64_t h, std::int64_t n) {
  // h(2n - θh)
  return Enclosure::integer(2 * h * n, th.precision()) - th.mul(h * h);
}

Enclosure alpha_enclosure(const Enclosure& th, std::int64_t h1, std::int64_t h2, std::int64_t n1, std::int64_t n2) {
  const Enclosure a = radicand(th, h1, n1);
  const Enclosure b = radicand(th, h2, n2);
  return (a - b) / (a.sqrt() + b.sqrt());
}

/// Fast α with an absolute error bound; radicands assumed positive.
struct FastAlpha {
  long double value;
  long double err;
  long double rhs_scale;  // √A + √B
};

FastAlpha fast_alpha(long double th, long double th_err, std::int64_t h1, std::int64_t h2, std::int64_t n1,
                     std::int64_t n2) {
  const long double k = static_cast<long double>(h1 * h1 - h2 * h2);
  const long double d = static_cast<long double>(2 * (h1 * n1 - h2 * n2)) - th * k;
  const long double a = static_cast<long double>(2 * h1 * n1) - th * static_cast<long double>(h1 * h1);
  const long double b = static_cast<long double>(2 * h2 * n2) - th * static_cast<long double>(h2 * h2);
  const long double s = std::sqrt(a) + std::sqrt(b);
  const long double eps = std::ldexp(1.0L, -60);
  const long double d_err = std::fabs(k) * th_err + (std::fabs(th * k) + std::fabs(d)) * eps;
  // the denominator error is relative and tiny next to d_err unless a or b is near 0
  const long double s_rel = eps * 8 + th_err * static_cast<long double>(h1 * h1 + h2 * h2) /
                                          std::max(std::min(a, b), std::numeric_limits<long double>::min());
  const long double v = d / s;
  return {v, d_err / s + std::fabs(v) * s_rel, s};
}

/// |α| <= Δ, certified. Returns nullopt when the precision ceiling is hit.
std::optional<bool> certified_within(const IrrationalParameter& theta, std::int64_t h1, std::int64_t h2,
                                     std::int64_t n1, std::int64_t n2, double delta, const FastAlpha& f) {
  const long double gap = std::fabs(f.value) - static_cast<long double>(delta);
  if (std::fabs(gap) > 2 * f.err) return gap < 0;
  return escalate(kStartBits, kMaxBits, [&](mpfr_prec_t bits) -> std::optional<bool> {
    const Enclosure al = alpha_enclosure(theta.enclose(static_cast<int>(bits)), h1, h2, n1, n2).abs();
    auto c = Enclosure::compare(al, Enclosure::point(delta, bits));
    if (!c) return std::nullopt;
    return *c < 0;
  });
}

struct AxisInfo {
  std::int64_t h;
  std::int64_t n_lo;  // first admissible n in the box
  std::int64_t n_hi;
  std::int64_t size() const { return std::max<std::int64_t>(0, n_hi - n_lo + 1); }
};

std::vector<AxisInfo> axis(const IrrationalParameter& theta, std::int64_t H, std::int64_t N) {
  std::vector<AxisInfo> out;
  for (std::int64_t h = H + 1; h <= 2 * H; ++h) out.push_back({h, std::max(N + 1, n_min(theta, h)), 2 * N});
  return out;
}

struct PairResult {
  std::int64_t count = 0;
  std::int64_t diagonal = 0;
  std::int64_t examined = 0;
  std::int64_t unresolved = 0;
  std::optional<double> min_alpha;
  Tuple4 witness{};
};

PairResult scan_pair(const IrrationalParameter& theta, const AxisInfo& x1, const AxisInfo& x2, double delta,
                     const ScanOptions& opt) {
  PairResult r;
  const long double th = theta.approx();
  const long double th_err = theta.approx_error();
  const std::int64_t h1 = x1.h;
  const std::int64_t h2 = x2.h;
  for (std::int64_t n1 = x1.n_lo; n1 <= x1.n_hi; ++n1) {
    std::int64_t lo = x2.n_lo;
    std::int64_t hi = x2.n_hi;
    if (opt.mode == ScanMode::pruned) {
      // |α| <= Δ forces B = h2(2n2 - θh2) into [(√A - Δ)₊², (√A + Δ)²]
      const long double ra = std::sqrt(static_cast<long double>(2 * h1 * n1) - th * static_cast<long double>(h1 * h1));
      const long double dl = static_cast<long double>(delta);
      const long double b_lo = ra > dl ? (ra - dl) * (ra - dl) : 0.0L;
      const long double b_hi = (ra + dl) * (ra + dl);
      const long double slack = 1.0L + opt.margin * b_hi;
      const long double c = th * static_cast<long double>(h2);
      const long double lo_f = std::floor(((b_lo - slack) / static_cast<long double>(h2) + c) / 2) - 1;
      const long double hi_f = std::ceil(((b_hi + slack) / static_cast<long double>(h2) + c) / 2) + 1;
      lo = std::max(lo, static_cast<std::int64_t>(lo_f));
      hi = std::min(hi, static_cast<std::int64_t>(hi_f));
    }
    for (std::int64_t n2 = lo; n2 <= hi; ++n2) {
      if (h1 == h2 && n1 == n2) {
        ++r.count;
        ++r.diagonal;
        ++r.examined;
        continue;
      }
      const FastAlpha f = fast_alpha(th, th_err, h1, h2, n1, n2);
      if (opt.mode == ScanMode::pruned) {
        // |A - B| <= Δ(√A + √B) <= Δ√2(√(h1n1) + √(h2n2))
        const long double band = static_cast<long double>(delta) * std::sqrt(2.0L) *
                                 (std::sqrt(static_cast<long double>(h1 * n1)) +
                                  std::sqrt(static_cast<long double>(h2 * n2))) *
                                 (1.0L + opt.margin);
        if (std::fabs(f.value * f.rhs_scale) > band + 1e-9L) continue;
      }
      ++r.examined;
      auto in = certified_within(theta, h1, h2, n1, n2, delta, f);
      if (!in) ++r.unresolved;
      if (in && !*in) continue;
      ++r.count;
      const double a = static_cast<double>(std::fabs(f.value));
      if (!r.min_alpha || a < *r.min_alpha) {
        r.min_alpha = a;
        r.witness = {h1, h2, n1, n2};
      }
    }
  }
  return r;
}

}  // namespace

AlphaValue alpha(const IrrationalParameter& theta, std::int64_t h1, std::int64_t h2, std::int64_t n1,
                 std::int64_t n2) {
  if (h1 < 1 || h2 < 1) throw DomainError("alpha: h must be positive");
  if (n1 < n_min(theta, h1) || n2 < n_min(theta, h2)) throw DomainError("alpha: radicand nonpositive (need n > θh)");
  AlphaValue out;
  if (h1 == h2 && n1 == n2) {
    out.exact_zero = true;
    return out;
  }
  // θ is irrational, so A - B = 2(h1n1 - h2n2) - θ(h1² - h2²) vanishes only on the diagonal
  auto v = escalate(kStartBits, kMaxBits, [&](mpfr_prec_t bits) -> std::optional<AlphaValue> {
    const Enclosure e = alpha_enclosure(theta.enclose(static_cast<int>(bits)), h1, h2, n1, n2);
    if (e.contains_zero()) return std::nullopt;
    return AlphaValue{e.mid_long_double(), false, e.strictly_positive() ? 1 : -1};
  });
  if (!v) throw PrecisionError("alpha: sign not certified");
  return *v;
}

void BoxSpec::validate() const {
  if (H1 < 2 || H2 < 2 || N1 < 2 || N2 < 2) throw DomainError("box: anchors must be >= 2");
  if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("box: delta must be positive");
  if (2 * std::max({H1, H2, N1, N2}) > (std::int64_t{1} << 30)) throw DomainError("box: anchors too large");
}

double BoxSpec::bound() const {
  const double p = static_cast<double>(H1) * static_cast<double>(H2) * static_cast<double>(N1) *
                   static_cast<double>(N2);
  const double lg = std::log(p);
  return delta * std::pow(p, 0.75) + std::sqrt(p) * lg * lg;
}

GapStatistics count_solutions(const IrrationalParameter& theta, const BoxSpec& box, const ScanOptions& opt) {
  box.validate();
  if (opt.budget < 1) throw DomainError("count_solutions: budget must be positive");
  const auto ax1 = axis(theta, box.H1, box.N1);
  const auto ax2 = axis(theta, box.H2, box.N2);

  GapStatistics st;
  st.bound = box.bound();
  std::int64_t c1 = 0, c2 = 0;
  for (const auto& a : ax1) c1 += a.size();
  for (const auto& a : ax2) c2 += a.size();
  st.admissible = c1 * c2;

  // Cost of each (h1, h2) pair, fixed before scanning so the cut is deterministic.
  struct Pair {
    std::size_t i, j;
    std::int64_t cost;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < ax1.size(); ++i) {
    for (std::size_t j = 0; j < ax2.size(); ++j) {
      std::int64_t cost = ax1[i].size() * ax2[j].size();
      if (opt.mode == ScanMode::pruned) {
        const double ra = std::sqrt(2.0 * static_cast<double>(ax1[i].h * ax1[i].n_hi));
        const double width = (4 * box.delta * ra + 2) / (2.0 * static_cast<double>(ax2[j].h)) + 4;
        cost = std::min(cost, ax1[i].size() * static_cast<std::int64_t>(std::ceil(width)));
      }
      pairs.push_back({i, j, cost});
    }
  }
  std::size_t take = 0;
  std::int64_t spent = 0;
  while (take < pairs.size() && spent + pairs[take].cost <= opt.budget) spent += pairs[take++].cost;

  const auto results = parallel_blocks<PairResult>(take, [&](std::size_t b) {
    return scan_pair(theta, ax1[pairs[b].i], ax2[pairs[b].j], box.delta, opt);
  });
  std::vector<std::pair<std::int64_t, std::int64_t>> done;
  for (std::size_t b = 0; b < take; ++b) {
    const PairResult& r = results[b];
    st.count += r.count;
    st.diagonal_count += r.diagonal;
    st.examined += r.examined;
    st.unresolved += r.unresolved;
    if (r.min_alpha && (!st.min_alpha_nonzero || *r.min_alpha < *st.min_alpha_nonzero)) {
      st.min_alpha_nonzero = r.min_alpha;
      st.min_alpha_witness = r.witness;
    }
    done.emplace_back(ax1[pairs[b].i].h, ax2[pairs[b].j].h);
  }
  if (take < pairs.size()) {
    throw PartialResultError("count_solutions: budget of " + std::to_string(opt.budget) + " tuples exhausted after " +
                                 std::to_string(take) + " of " + std::to_string(pairs.size()) + " (h1, h2) sub-boxes",
                             st, std::move(done));
  }
  return st;
}

Lemma46Report check_lemma46(const IrrationalParameter& theta, double gamma, double epsilon, std::int64_t h_max,
                            std::int64_t n_max, int steps) {
  if (!(gamma > 0) || !(epsilon >= 0)) throw DomainError("check_lemma46: need gamma > 0, epsilon >= 0");
  if (steps < 1 || h_max < 1 || n_max < 2) throw DomainError("check_lemma46: empty ladder");
  if (h_max > 4096 || n_max > 1 << 20) throw DomainError("check_lemma46: range too large");
  const long double th = theta.approx();
  const long double th_err = theta.approx_error();
  const double expo = (gamma + epsilon) / 2;

  std::vector<std::int64_t> hs(static_cast<std::size_t>(steps)), ns(hs.size());
  for (int s = 0; s < steps; ++s) {
    hs[static_cast<std::size_t>(s)] = std::max<std::int64_t>(1, h_max >> (steps - 1 - s));
    ns[static_cast<std::size_t>(s)] = std::max<std::int64_t>(2, n_max >> (steps - 1 - s));
  }
  auto shell_of = [&](std::int64_t h, std::int64_t n) {
    for (std::size_t s = 0; s < hs.size(); ++s) {
      if (h <= hs[s] && n <= ns[s]) return s;
    }
    return hs.size() - 1;
  };
  std::vector<std::int64_t> nmin(static_cast<std::size_t>(h_max) + 1);
  for (std::int64_t h = 1; h <= h_max; ++h) nmin[static_cast<std::size_t>(h)] = n_min(theta, h);

  struct Partial {
    std::vector<Lemma46Shell> shells;
    std::int64_t scanned = 0, excluded = 0;
  };
  auto update = [](std::optional<double>& m, Tuple4& w, double v, const Tuple4& t) {
    if (!m || v < *m) {
      m = v;
      w = t;
    }
  };
  const auto parts = parallel_blocks<Partial>(static_cast<std::size_t>(h_max), [&](std::size_t b) {
    Partial p;
    p.shells.resize(hs.size());
    const std::int64_t h1 = static_cast<std::int64_t>(b) + 1;
    for (std::int64_t n1 = nmin[static_cast<std::size_t>(h1)]; n1 <= n_max; ++n1) {
      for (std::int64_t h2 = 1; h2 <= h_max; ++h2) {
        for (std::int64_t n2 = nmin[static_cast<std::size_t>(h2)]; n2 <= n_max; ++n2) {
          ++p.scanned;
          if (h1 == h2 && n1 == n2) {
            ++p.excluded;
            continue;
          }
          const FastAlpha f = fast_alpha(th, th_err, h1, h2, n1, n2);
          const long double a = std::fabs(f.value);
          const long double beta = (static_cast<long double>(2 * h1 * n1) - th * static_cast<long double>(h1 * h1)) *
                                   (static_cast<long double>(2 * h2 * n2) - th * static_cast<long double>(h2 * h2));
          if (!(a < std::pow(beta, 0.25L) / 10)) {
            ++p.excluded;
            continue;
          }
          const Tuple4 t{h1, h2, n1, n2};
          auto& sh = p.shells[std::max(shell_of(h1, n1), shell_of(h2, n2))];
          if (h1 == h2) {
            const double r = static_cast<double>(a * std::pow(static_cast<long double>(n1 * n2), 0.25L) /
                                                 std::sqrt(static_cast<long double>(h1)));
            update(sh.equal_h_min, sh.equal_h_witness, r, t);
          } else {
            const long double hh = static_cast<long double>(h1 * h2);
            const double r = static_cast<double>(a * std::pow(hh * static_cast<long double>(n1 * n2), 0.25L) *
                                                 std::pow(hh, static_cast<long double>(expo)));
            update(sh.distinct_h_min, sh.distinct_h_witness, r, t);
            const long double k = std::fabs(static_cast<long double>(h1 * h1 - h2 * h2));
            const double rs = static_cast<double>(a * std::pow(hh * static_cast<long double>(n1 * n2), 0.25L) *
                                                  std::pow(k, static_cast<long double>(2 * expo)));
            update(sh.distinct_h_sharp_min, sh.distinct_h_sharp_witness, rs, t);
          }
        }
      }
    }
    return p;
  });

  Lemma46Report rep;
  rep.shells.resize(hs.size());
  for (std::size_t s = 0; s < hs.size(); ++s) {
    rep.shells[s].h_max = hs[s];
    rep.shells[s].n_max = ns[s];
  }
  for (const auto& p : parts) {
    rep.scanned += p.scanned;
    rep.excluded += p.excluded;
    for (std::size_t s = 0; s < hs.size(); ++s) {
      const auto& src = p.shells[s];
      auto& dst = rep.shells[s];
      if (src.equal_h_min) update(dst.equal_h_min, dst.equal_h_witness, *src.equal_h_min, src.equal_h_witness);
      if (src.distinct_h_min)
        update(dst.distinct_h_min, dst.distinct_h_witness, *src.distinct_h_min, src.distinct_h_witness);
      if (src.distinct_h_sharp_min)
        update(dst.distinct_h_sharp_min, dst.distinct_h_sharp_witness, *src.distinct_h_sharp_min,
               src.distinct_h_sharp_witness);
    }
  }
  for (const auto& sh : rep.shells) {
    if (sh.equal_h_min) update(rep.equal_h_min, rep.equal_h_witness, *sh.equal_h_min, sh.equal_h_witness);
    if (sh.distinct_h_min) update(rep.distinct_h_min, rep.distinct_h_witness, *sh.distinct_h_min, sh.distinct_h_witness);
    if (sh.distinct_h_sharp_min)
      update(rep.distinct_h_sharp_min, rep.distinct_h_sharp_witness, *sh.distinct_h_sharp_min,
             sh.distinct_h_sharp_witness);
  }
  auto slope = [&](auto get) {
    std::vector<double> xs, ys;
    for (const auto& sh : rep.shells) {
      const auto v = get(sh);
      if (v && *v > 0) {
        xs.push_back(std::log(static_cast<double>(sh.h_max)));
        ys.push_back(std::log(*v));
      }
    }
    if (xs.size() < 2) return 0.0;
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
  };
  rep.equal_h_trend = slope([](const Lemma46Shell& s) { return s.equal_h_min; });
  rep.distinct_h_trend = slope([](const Lemma46Shell& s) { return s.distinct_h_min; });
  rep.distinct_h_sharp_trend = slope([](const Lemma46Shell& s) { return s.distinct_h_sharp_min; });
  rep.sharp_holds = rep.equal_h_min && *rep.equal_h_min > 0 && rep.distinct_h_sharp_min &&
                    *rep.distinct_h_sharp_min > 0 && rep.equal_h_trend >= kLemma46TrendFloor &&
                    rep.distinct_h_sharp_trend >= kLemma46TrendFloor;
  rep.holds = rep.equal_h_min && *rep.equal_h_min > 0 && rep.distinct_h_min && *rep.distinct_h_min > 0 &&
              rep.equal_h_trend >= kLemma46TrendFloor && rep.distinct_h_trend >= kLemma46TrendFloor;
  return rep;
}

}  // namespace hw
