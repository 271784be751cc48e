#pragma once

// One function per hwweyl subcommand. Each returns the artifact body plus a
// JSON summary for the run manifest, so the CLI and the acceptance driver
// produce byte-identical files from the same arguments.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hw/io.hpp"

namespace hw::cmd {

struct Artifact {
  std::string body;
  std::string format;            // "csv" or "json"
  nlohmann::json summary;        // boundary tallies, dropped mass, headline numbers
};

std::string version();

Artifact spectrum(const RunConfig& rc, double t_max, int precision);
Artifact count(const RunConfig& rc, double t);
Artifact psi_check(const RunConfig& rc, double x_min, double x_max, int samples, int precision);
Artifact vaaler_check(double H, int grid, int precision);
Artifact vdc_check(const RunConfig& rc, double x, std::int64_t h, int j1, int j);
Artifact r11(const RunConfig& rc, double T, int samples, double relative_floor, int precision);
Artifact alpha_count(const RunConfig& rc, std::int64_t H1, std::int64_t H2, std::int64_t N1, std::int64_t N2,
                     double delta, bool unpruned);
Artifact meansquare(const RunConfig& rc, double T_min, double T_max, int ladder);
Artifact constant(const RunConfig& rc, double eps);
Artifact theorem2(double h11, double h12, double h22, double g3, bool rational, double eps);

/// Jump midpoints of N(2πx) in [T, 2T], `samples` of them evenly strided.
std::vector<double> jump_midpoints(const ManifoldConfig& cfg, double T, int samples);

/// Manifest for an artifact written by `subcommand` with the given arguments.
nlohmann::json manifest(const std::string& subcommand, const nlohmann::json& args, const std::string& config_json,
                        const Artifact& a, double wall_seconds, std::uint64_t seed);

std::string dump(const nlohmann::json& j);

}  // namespace hw::cmd
