#include "hw/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hw {

namespace {

using nlohmann::json;

IrrationalParameter theta_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  IrrationalParameter th = IrrationalParameter::sqrt2();
  if (kind == "quadratic-surd") {
    th = IrrationalParameter::quadratic_surd(j.value("p", std::int64_t{0}), j.at("q").get<std::int64_t>(),
                                             j.value("s", std::int64_t{1}), j.at("d").get<std::int64_t>());
  } else if (kind == "partial-quotients") {
    const std::string rule = j.value("rule", std::string("constant"));
    ContinuationRule r;
    if (rule == "periodic") {
      r = ContinuationRule::periodic;
    } else if (rule == "constant") {
      r = ContinuationRule::constant;
    } else {
      throw ConfigError("theta: unknown continuation rule '" + rule + "'");
    }
    th = IrrationalParameter::partial_quotients(j.at("prefix").get<std::vector<std::int64_t>>(), r);
  } else if (kind == "literal") {
    th = IrrationalParameter::literal(j.at("decimal").get<std::string>(), j.at("bits").get<int>());
  } else {
    throw ConfigError("theta: unknown kind '" + kind + "'");
  }
  if (j.contains("declared_type")) {
    const auto& d = j.at("declared_type");
    th = th.with_declared_type(d.at("gamma").get<double>(), d.value("note", std::string()));
  }
  return th;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

IrrationalParameter parse_theta(const std::string& json_text) {
  return guarded("theta", [&] { return theta_from(json::parse(json_text)); });
}

RunConfig parse_run_config(const std::string& json_text) {
  return guarded("config", [&] {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    RunConfig rc;
    rc.manifold.l = j.value("l", 1);
    rc.manifold.theta = theta_from(j.at("theta"));
    rc.manifold.validate();
    rc.precision_bits = j.value("precision_bits", default_precision_bits());
    if (rc.precision_bits < kMinPrecisionBits || rc.precision_bits > kMaxPrecisionBits)
      throw ConfigError("config: precision_bits out of range");
    rc.workers = j.value("workers", 1);
    if (rc.workers < 1) throw ConfigError("config: workers must be positive");
    rc.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("budget")) {
      rc.tuple_budget = static_cast<std::int64_t>(j.at("budget").value("tuples", 1e9));
      if (rc.tuple_budget < 1) throw ConfigError("config: tuple budget must be positive");
    }
    rc.canonical_json = j.dump();  // keys sorted by nlohmann's std::map
    return rc;
  });
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path)); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_real(long double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.*Lg", std::clamp(digits, 1, 40), v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns, int precision)
    : columns_(std::move(columns)), precision_(precision) {
  if (precision < 1 || precision > 40) throw DomainError("csv: precision must be in [1, 40]");
}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != columns_.size()) throw DomainError("csv: row width does not match the schema");
  rows_.push_back(std::move(row));
}

namespace {
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}
}  // namespace

std::string CsvTable::render() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + quote(columns_[i]);
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* r = std::get_if<long double>(&row[i])) {
        out += format_real(*r, precision_);
      } else if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
        out += std::to_string(*n);
      } else {
        out += quote(std::get<std::string>(row[i]));
      }
    }
    out += '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("rename " + tmp + " -> " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace hw
