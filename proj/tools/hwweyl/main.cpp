// hwweyl: command-line front end for the spectral counting library.
//
// Exit status: 0 success, 1 usage error, 2 precondition error, 3 budget or
// I/O error, 4 acceptance failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "hw/parallel.hpp"
#include "suite.hpp"

namespace {

using hw::cmd::Artifact;
using nlohmann::json;

struct Common {
  std::string config;
  std::string out;
  int precision = 17;
};

int emit(const std::string& sub, const json& args, const std::string& config_json, const Artifact& a,
         double seconds, std::uint64_t seed, const std::string& out) {
  const json m = hw::cmd::manifest(sub, args, config_json, a, seconds, seed);
  if (out.empty()) {
    std::cout << a.body;
    std::cerr << m.dump() << "\n";
  } else {
    hw::write_atomic(out, a.body);
    hw::write_atomic(out + ".manifest.json", hw::cmd::dump(m));
  }
  return a.summary.value("partial", false) ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl-law numerics for Heisenberg manifolds"};
  app.require_subcommand(1);
  int workers = 1;
  std::uint64_t seed = 0;
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for randomized sampling");

  std::function<int()> action;
  auto add_config = [](CLI::App* s, Common& c, bool out_required) {
    s->add_option("--config", c.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    auto* o = s->add_option("--out", c.out, "artifact path");
    if (out_required) o->required();
  };

  // Wraps a subcommand body with config loading, timing and manifest emission.
  auto runner = [&](const std::string& sub, Common& c, json& args, std::function<Artifact(const hw::RunConfig&)> f) {
    return [&, sub, f] {
      hw::RunConfig rc;
      if (!c.config.empty()) rc = hw::load_run_config(c.config);
      if (app.get_option("--workers")->count() == 0) workers = rc.workers;
      hw::set_worker_count(workers);
      const auto t0 = std::chrono::steady_clock::now();
      const Artifact a = f(rc);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return emit(sub, args, rc.canonical_json, a, secs, seed, c.out);
    };
  };

  Common c_spec, c_count, c_psi, c_vaal, c_vdc, c_r11, c_alpha, c_ms, c_const, c_t2;
  json args;

  double tmax = 0;
  auto* s = app.add_subcommand("spectrum", "list eigenvalues up to tmax (CSV)");
  add_config(s, c_spec, true);
  s->add_option("--tmax", tmax)->required();
  s->add_option("--precision", c_spec.precision, "significant digits")->check(CLI::Range(1, 40));
  s->callback([&] {
    args = {{"tmax", tmax}, {"precision", c_spec.precision}};
    action = runner("spectrum", c_spec, args, [&](const hw::RunConfig& rc) { return hw::cmd::spectrum(rc, tmax, c_spec.precision); });
  });

  double t = 0;
  s = app.add_subcommand("count", "N(t), the Weyl main term and R(t) (JSON)");
  add_config(s, c_count, false);
  s->add_option("--t", t)->required();
  s->callback([&] {
    args = {{"t", t}};
    action = runner("count", c_count, args, [&](const hw::RunConfig& rc) { return hw::cmd::count(rc, t); });
  });

  double xmin = 0, xmax = 0;
  int samples = 200;
  s = app.add_subcommand("psi-check", "R(2πx) against its ψ-sum (CSV)");
  add_config(s, c_psi, true);
  s->add_option("--xmin", xmin)->required();
  s->add_option("--xmax", xmax)->required();
  s->add_option("--samples", samples);
  s->add_option("--precision", c_psi.precision)->check(CLI::Range(1, 40));
  s->callback([&] {
    args = {{"xmin", xmin}, {"xmax", xmax}, {"samples", samples}, {"precision", c_psi.precision}};
    action = runner("psi-check", c_psi, args,
                    [&](const hw::RunConfig& rc) { return hw::cmd::psi_check(rc, xmin, xmax, samples, c_psi.precision); });
  });

  double H = 0;
  int grid = 10000;
  s = app.add_subcommand("vaaler-check", "Vaaler and truncated Fourier approximations of ψ on a grid");
  s->add_option("--H", H)->required();
  s->add_option("--grid", grid);
  s->add_option("--out", c_vaal.out, "CSV path (summary JSON on stdout otherwise)");
  s->add_option("--precision", c_vaal.precision)->check(CLI::Range(1, 40));
  s->callback([&] {
    args = {{"H", H}, {"grid", grid}};
    action = [&] {
      hw::set_worker_count(workers);
      Artifact a = hw::cmd::vaaler_check(H, grid, c_vaal.precision);
      if (c_vaal.out.empty()) a.body = hw::cmd::dump(a.summary);
      return emit("vaaler-check", args, "{}", a, 0.0, seed, c_vaal.out);
    };
  });

  double x = 0;
  std::int64_t h = 1;
  int j1 = 0, j = 0;
  s = app.add_subcommand("vdc-check", "direct vs transformed exponential sum (JSON)");
  s->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  add_config(s, c_vdc, false);
  s->add_option("--x", x)->required();
  s->add_option("--h", h)->required();
  s->add_option("--j1", j1)->required();
  s->add_option("--j", j)->required();
  s->callback([&] {
    args = {{"x", x}, {"h", h}, {"j1", j1}, {"j", j}};
    action = runner("vdc-check", c_vdc, args, [&](const hw::RunConfig& rc) { return hw::cmd::vdc_check(rc, x, h, j1, j); });
  });

  double T = 0, floor = 1e-4;
  int r_samples = 1000;
  s = app.add_subcommand("r11", "truncated Voronoi-type series against R (CSV)");
  add_config(s, c_r11, true);
  s->add_option("--T", T)->required();
  s->add_option("--samples", r_samples);
  s->add_option("--floor", floor, "drop terms below floor × max|u|");
  s->add_option("--precision", c_r11.precision)->check(CLI::Range(1, 40));
  s->callback([&] {
    args = {{"T", T}, {"samples", r_samples}, {"floor", floor}};
    action = runner("r11", c_r11, args,
                    [&](const hw::RunConfig& rc) { return hw::cmd::r11(rc, T, r_samples, floor, c_r11.precision); });
  });

  std::int64_t H1 = 0, H2 = 0, N1 = 0, N2 = 0;
  double delta = 0;
  bool unpruned = false;
  s = app.add_subcommand("alpha-count", "count |α| <= Δ over a dyadic box (JSON)");
  add_config(s, c_alpha, false);
  s->add_option("--H1", H1)->required();
  s->add_option("--H2", H2)->required();
  s->add_option("--N1", N1)->required();
  s->add_option("--N2", N2)->required();
  s->add_option("--delta", delta)->required();
  s->add_flag("--unpruned", unpruned, "examine every tuple");
  s->callback([&] {
    args = {{"H1", H1}, {"H2", H2}, {"N1", N1}, {"N2", N2}, {"delta", delta}, {"unpruned", unpruned}};
    action = runner("alpha-count", c_alpha, args,
                    [&](const hw::RunConfig& rc) { return hw::cmd::alpha_count(rc, H1, H2, N1, N2, delta, unpruned); });
  });

  double Tmin = 0, Tmax = 0;
  int ladder = 8;
  s = app.add_subcommand("meansquare", "mean square of R over a geometric ladder (JSON)");
  add_config(s, c_ms, false);
  s->add_option("--Tmin", Tmin)->required();
  s->add_option("--Tmax", Tmax)->required();
  s->add_option("--ladder", ladder);
  s->callback([&] {
    args = {{"Tmin", Tmin}, {"Tmax", Tmax}, {"ladder", ladder}};
    action = runner("meansquare", c_ms, args,
                    [&](const hw::RunConfig& rc) { return hw::cmd::meansquare(rc, Tmin, Tmax, ladder); });
  });

  double eps = 1e-8;
  s = app.add_subcommand("constant", "the mean-square series constant (JSON)");
  add_config(s, c_const, false);
  s->add_option("--eps", eps);
  s->callback([&] {
    args = {{"eps", eps}};
    action = runner("constant", c_const, args, [&](const hw::RunConfig& rc) { return hw::cmd::constant(rc, eps); });
  });

  double h11 = 1, h12 = 0, h22 = 1, g3 = 1;
  bool rational = false;
  s = app.add_subcommand("theorem2", "map a general 3-dimensional metric to θ (JSON)");
  s->add_option("--h11", h11)->required();
  s->add_option("--h12", h12)->required();
  s->add_option("--h22", h22)->required();
  s->add_option("--g3", g3)->required();
  s->add_flag("--rational", rational, "declare the resulting θ rational");
  s->add_option("--eps", eps);
  s->add_option("--out", c_t2.out);
  s->callback([&] {
    args = {{"h11", h11}, {"h12", h12}, {"h22", h22}, {"g3", g3}, {"rational", rational}, {"eps", eps}};
    action = [&] {
      hw::set_worker_count(workers);
      return emit("theorem2", args, "{}", hw::cmd::theorem2(h11, h12, h22, g3, rational, eps), 0.0, seed, c_t2.out);
    };
  });

  std::string suite = "primary", report;
  std::vector<int> only;
  s = app.add_subcommand("accept", "run the acceptance matrix");
  s->add_option("--suite", suite)->check(CLI::IsMember({"primary"}));
  s->add_option("--only", only, "criterion ids")->delimiter(',');
  s->add_option("--out", report, "JSON report path");
  s->callback([&] {
    action = [&] {
      hw::cmd::SuiteOptions opt;
      opt.only = {only.begin(), only.end()};
      if (app.get_option("--seed")->count()) opt.seed = seed;
      opt.workers = workers;
      const auto results = hw::cmd::run_primary_suite(opt, [](const hw::cmd::CriterionResult& r) {
        std::cout << hw::cmd::format_result(r) << std::endl;
      });
      bool ok = true;
      json rep = json::array();
      for (const auto& r : results) {
        ok = ok && r.pass;
        rep.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
      }
      if (!report.empty()) hw::write_atomic(report, hw::cmd::dump(rep));
      return ok ? 0 : 4;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    return action();
  } catch (const hw::BudgetError& e) {
    std::cerr << "hwweyl: budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const hw::Error& e) {
    std::cerr << "hwweyl: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hwweyl: " << e.what() << "\n";
    return 3;
  }
}
