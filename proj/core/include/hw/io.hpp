#pragma once

// Run configuration, deterministic CSV emission and atomic artifact writes.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hw/spectrum.hpp"

namespace hw {

/// θ from its JSON description:
///   {"kind": "quadratic-surd", "p", "q", "s", "d"}
///   {"kind": "partial-quotients", "prefix": [...], "rule": "periodic" | "constant"}
///   {"kind": "literal", "decimal": "...", "bits": n}
/// Each may carry "declared_type": {"gamma": g, "note": "..."}.
IrrationalParameter parse_theta(const std::string& json_text);

struct RunConfig {
  ManifoldConfig manifold;
  int precision_bits = kDefaultPrecisionBits;
  int workers = 1;
  std::uint64_t seed = 0;
  std::int64_t tuple_budget = 1'000'000'000;
  std::string canonical_json;  // normalized config text, hashed into manifests
};

/// {"l": 1, "theta": {...}, "precision_bits": 192, "workers": 1, "seed": 0,
///  "budget": {"tuples": 1e9}}; only "theta" is required.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// %.{digits}Lg with the C locale; "nan"/"inf" spelled out.
std::string format_real(long double v, int digits);

using CsvCell = std::variant<long double, std::int64_t, std::string>;

class CsvTable {
 public:
  CsvTable(std::vector<std::string> columns, int precision);
  void add_row(std::vector<CsvCell> row);
  std::size_t rows() const { return rows_.size(); }
  /// Header line, one line per row, "\n" terminated; strings quoted when needed.
  std::string render() const;

 private:
  std::vector<std::string> columns_;
  int precision_;
  std::vector<std::vector<CsvCell>> rows_;
};

/// Writes to path.tmp.<pid> and renames over path.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace hw
