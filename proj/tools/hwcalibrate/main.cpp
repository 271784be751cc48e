// Refits the frozen constants on their small calibration grids and prints a
// registry fragment. The shipped registry is only changed by hand.

#include <algorithm>
#include <cmath>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hw/expsum.hpp"
#include "hw/gapcount.hpp"
#include "hw/parallel.hpp"
#include "hw/registry.hpp"

using nlohmann::json;

namespace {

double round_up(double v, double step) { return std::ceil(v / step) * step; }

json calibrate_vdc(double safety) {
  const hw::EnvelopeConstants unit;
  double worst = 0.0;
  for (int l : {1, 2, 3}) {
    hw::ManifoldConfig cfg;
    cfg.l = l;
    for (double x : {500.0, 1000.0, 2000.0, 5000.0})
      for (std::int64_t h = 1; h <= 4; ++h)
        for (int j = 0; j <= 3; ++j)
          for (int j1 = 0; j1 < l; ++j1) {
            const auto r = hw::transformed_S(cfg, x, h, j1, j, unit);
            worst = std::max(worst, static_cast<double>(std::abs(r.direct - r.transformed)) / r.envelope);
          }
  }
  const double k = round_up(worst * safety, 0.05);
  return {{"log_term", k}, {"length_term", k}, {"endpoint_term", k}, {"max_ratio_unit_constants", worst},
          {"safety_factor", safety}};
}

json calibrate_gap(double safety) {
  double worst = 0.0;
  for (const auto& th : {hw::IrrationalParameter::sqrt2(), hw::IrrationalParameter::golden()})
    for (std::int64_t H : {2, 4})
      for (std::int64_t N = 2 * H; N <= 16; N *= 2)
        for (double delta : {0.01, 0.05, 0.2}) {
          const auto st = hw::count_solutions(th, {H, H, N, N, delta});
          worst = std::max(worst, static_cast<double>(st.count) / st.bound);
        }
  return {{"c", round_up(worst * safety, 0.05)}, {"max_ratio", worst}, {"safety_factor", safety}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"refit the frozen envelope and counting constants"};
  double vdc_safety = 3.0, gap_safety = 2.4;
  int workers = 1;
  app.add_option("--vdc-safety", vdc_safety);
  app.add_option("--gap-safety", gap_safety);
  app.add_option("--workers", workers)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  hw::set_worker_count(workers);
  const json out = {{"vdc_envelope", calibrate_vdc(vdc_safety)},
                    {"gap_count", calibrate_gap(gap_safety)},
                    {"shipped", json::parse(hw::frozen_constants().json)}};
  std::cout << out.dump(2) << "\n";
}
