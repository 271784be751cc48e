#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "hw/io.hpp"
#include "hw/registry.hpp"

using namespace hw;

TEST_CASE("theta descriptions") {
  const auto s = parse_theta(R"({"kind": "quadratic-surd", "p": 1, "q": 1, "s": 2, "d": 5})");
  CHECK(s.kind() == IrrationalParameter::Kind::quadratic_surd);
  CHECK(s.approx() == doctest::Approx(1.6180339887498949));
  const auto pq = parse_theta(R"({"kind": "partial-quotients", "prefix": [1, 2], "rule": "periodic"})");
  CHECK(pq.approx() == doctest::Approx(M_SQRT2));
  const auto lit = parse_theta(R"({"kind": "literal", "decimal": "1.41421356237309504880168872420969807856967", "bits": 128,
                                   "declared_type": {"gamma": 1.0, "note": "surd"}})");
  CHECK(lit.kind() == IrrationalParameter::Kind::literal);
  REQUIRE(lit.declared_type().has_value());
  CHECK(*lit.declared_type() == 1.0);
  CHECK(lit.type_note() == "surd");

  CHECK_THROWS_AS(parse_theta("{"), ConfigError);
  CHECK_THROWS_AS(parse_theta(R"({"kind": "bogus"})"), ConfigError);
  CHECK_THROWS_AS(parse_theta(R"({"kind": "partial-quotients", "prefix": [1, 2], "rule": "sometimes"})"), ConfigError);
  CHECK_THROWS_AS(parse_theta(R"({"kind": "quadratic-surd", "p": 0, "q": 1, "s": 1, "d": 4})"), ConfigError);
}

TEST_CASE("run config") {
  const RunConfig c = parse_run_config(
      R"({"l": 2, "theta": {"kind": "quadratic-surd", "p": 0, "q": 1, "s": 1, "d": 2}, "workers": 3,
          "seed": 7, "budget": {"tuples": 1000}})");
  CHECK(c.manifold.l == 2);
  CHECK(c.workers == 3);
  CHECK(c.seed == 7);
  CHECK(c.tuple_budget == 1000);
  CHECK(c.precision_bits == kDefaultPrecisionBits);
  // canonical text ignores key order and whitespace
  const RunConfig d = parse_run_config(
      R"({"seed": 7, "workers": 3, "budget": {"tuples": 1000},
          "theta": {"d": 2, "kind": "quadratic-surd", "p": 0, "q": 1, "s": 1}, "l": 2})");
  CHECK(c.canonical_json == d.canonical_json);
  CHECK_THROWS_AS(parse_run_config(R"({"l": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"l": 0, "theta": {"kind": "quadratic-surd", "p": 0, "q": 1, "s": 1, "d": 2}})"),
                  Error);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("fnv1a test vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("csv rendering") {
  CsvTable empty({"a", "b"}, 6);
  CHECK(empty.render() == "a,b\n");
  CsvTable t({"x", "n", "label"}, 5);
  t.add_row({1.0L / 3, std::int64_t{42}, std::string("plain")});
  t.add_row({2.5L, std::int64_t{-1}, std::string("has,comma \"q\"")});
  CHECK(t.rows() == 2);
  CHECK(t.render() == "x,n,label\n0.33333,42,plain\n2.5,-1,\"has,comma \"\"q\"\"\"\n");
  CHECK_THROWS_AS(t.add_row({1.0L}), DomainError);
  CHECK_THROWS_AS(CsvTable({"a"}, 0), DomainError);
  CHECK(format_real(1.0L / 0.0L, 5) == "inf");
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "hw_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  write_atomic(path, "one\n");
  write_atomic(path, "two\n");
  CHECK(read_file(path) == "two\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS(write_atomic("/nonexistent/dir/out.csv", "x"));
}

TEST_CASE("frozen constant registry") {
  const FrozenConstants& f = frozen_constants();
  CHECK(f.version == 1);
  CHECK(f.gap_count_c > 0);
  CHECK(f.vdc_envelope.log_term > 0);
  CHECK(&f == &frozen_constants());
}
