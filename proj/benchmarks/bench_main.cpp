#include <benchmark/benchmark.h>

#include "hw/gapcount.hpp"
#include "hw/meansquare.hpp"
#include "hw/psiexpr.hpp"
#include "hw/spectrum.hpp"

namespace {

hw::ManifoldConfig config(int l) {
  hw::ManifoldConfig c;
  c.l = l;
  return c;
}

void BM_CountN(benchmark::State& st) {
  const auto cfg = config(1);
  const double t = static_cast<double>(st.range(0));
  const hw::SpectrumCounter counter(cfg, t);
  for (auto _ : st) benchmark::DoNotOptimize(counter.count(t));
}
BENCHMARK(BM_CountN)->Arg(1000)->Arg(100000)->Arg(10000000);

void BM_EnumerateSpectrum(benchmark::State& st) {
  const auto cfg = config(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hw::enumerate_spectrum(cfg, 20000.0));
}
BENCHMARK(BM_EnumerateSpectrum)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_PsiSum(benchmark::State& st) {
  const auto cfg = config(1);
  const double x = static_cast<double>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(hw::psi_sum_R(cfg, x));
}
BENCHMARK(BM_PsiSum)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMicrosecond);

void BM_GapCount(benchmark::State& st) {
  const auto th = hw::IrrationalParameter::sqrt2();
  const std::int64_t H = st.range(0);
  const hw::BoxSpec box{H, H, 4 * H, 4 * H, 0.05};
  for (auto _ : st) benchmark::DoNotOptimize(hw::count_solutions(th, box));
}
BENCHMARK(BM_GapCount)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SeriesConstant(benchmark::State& st) {
  const auto cfg = config(1);
  for (auto _ : st) benchmark::DoNotOptimize(hw::compute_C(cfg, 1e-10));
}
BENCHMARK(BM_SeriesConstant)->Unit(benchmark::kMillisecond);

void BM_MeanSquareLadder(benchmark::State& st) {
  const auto cfg = config(1);
  const auto Ts = hw::geometric_ladder(1e3, 1e5, 8);
  for (auto _ : st) {
    hw::MeanSquareIntegrator integ(cfg, Ts.back());
    benchmark::DoNotOptimize(integ.ladder(Ts));
  }
}
BENCHMARK(BM_MeanSquareLadder)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
