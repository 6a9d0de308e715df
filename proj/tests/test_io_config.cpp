#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "chasym/config.hpp"
#include "chasym/io.hpp"

using namespace chasym;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("chasym_test_" + name);
  fs::remove_all(p);
  return p;
}

json simulate_json() {
  return json::parse(R"({
    "schema_version": 1,
    "spec": {"n": 2, "d": 1, "nonlinearity": "cahn_hilliard"},
    "grid": {"N": 256, "L": 320.0},
    "initial": {"kind": "gaussian", "amplitude": 0.1, "width": 2.0},
    "integrator": {"t_end": 10.0, "snapshots": {"count": 3, "spacing": "log"}}
  })");
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("FNV-1a checksums of the little-endian payload") {
    CHECK(checksum(std::vector<double>{}) == "cbf29ce484222325");
    CHECK(checksum(std::vector<double>{1.0}) == "aab1693229ba1db8");
    CHECK(checksum(std::vector<double>{1.0, -2.5, 3e-300}) == "c7c2cefc78f28ecb");
  }

  TEST_CASE("snapshot round trip and corruption") {
    const auto dir = scratch("snap");
    Snapshot s{2.5, Field(Grid{1, 16, 4.0}), ""};
    for (std::size_t i = 0; i < s.field.values.size(); ++i) s.field.values[i] = 0.1 * i - 0.7;
    const auto header = write_snapshot(dir, 3, s);
    CHECK(header == "0003.json");
    const auto back = read_snapshot(dir / header);
    CHECK(back.time == 2.5);
    CHECK(back.field.values == s.field.values);
    CHECK(back.checksum == s.checksum);
    {
      std::fstream f(dir / "0003.bin", std::ios::in | std::ios::out | std::ios::binary);
      f.seekp(5);
      f.put('\x7f');
    }
    CHECK_THROWS_AS(read_snapshot(dir / header), NumericalFailure);
    fs::remove_all(dir);
  }

  TEST_CASE("record round trip") {
    const auto dir = scratch("record");
    RunRecord r;
    r.metadata = {{"kind", "simulate"}, {"note", "x"}};
    r.columns = {"t", "sup"};
    r.rows = {{1.0, 0.1}, {2.0, 1.0 / 3.0}, {4.0, 1e-300}};
    r.snapshots.push_back({1.0, Field(Grid{1, 8, 1.0}), ""});
    r.snapshots.push_back({4.0, Field(Grid{1, 8, 1.0}), ""});
    r.snapshots[1].field.values[3] = 0.123456789012345678;
    write_record(dir, r);
    const auto b = read_record(dir);
    CHECK(b.columns == r.columns);
    CHECK(b.rows == r.rows);  // %.17g is exact
    CHECK(b.metadata == r.metadata);
    REQUIRE(b.snapshots.size() == 2);
    CHECK(b.snapshots[1].field.values == r.snapshots[1].field.values);
    CHECK(b.series("sup")[1] == 1.0 / 3.0);
    CHECK_THROWS_AS(b.column("missing"), ValidationError);
    fs::remove_all(dir);
  }

  TEST_CASE("records need increasing times") {
    RunRecord r;
    r.columns = {"t"};
    r.rows = {{1.0}, {1.0}};
    CHECK_THROWS_AS(r.validate(), ValidationError);
  }
}

TEST_SUITE("config") {
  TEST_CASE("a complete simulate config parses") {
    const auto c = parse_simulate(simulate_json());
    CHECK(c.spec.label == "cahn_hilliard");
    CHECK(c.grid.n == 256);
    CHECK(c.integrator.snapshot_times.size() == 3);
    CHECK(c.integrator.snapshot_times.back() == 10.0);
    CHECK(c.integrator.dealias == Dealias::TwoThirds);
  }

  TEST_CASE("unknown keys are rejected at every level") {
    for (const char* path : {"/bogus", "/spec/bogus", "/grid/bogus", "/initial/bogus", "/integrator/bogus",
                             "/integrator/snapshots/bogus"}) {
      auto j = simulate_json();
      j[json::json_pointer(path)] = 1;
      CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    }
    try {
      auto j = simulate_json();
      j["grid"]["Nx"] = 4;
      parse_simulate(j);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("Nx") != std::string::npos);
    }
  }

  TEST_CASE("missing, mistyped and out-of-range values") {
    auto j = simulate_json();
    j.erase("schema_version");
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    j = simulate_json();
    j["schema_version"] = 2;
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    j = simulate_json();
    j["grid"]["N"] = "256";
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    j = simulate_json();
    j["grid"]["N"] = 100;  // not a power of two
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    j = simulate_json();
    j["integrator"]["snapshots"] = json::array({0.5});
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    j = simulate_json();
    j["integrator"]["dealias"] = "3/4";
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
    j = simulate_json();
    j["spec"]["nonlinearity"] = "allen_cahn";
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);
  }

  TEST_CASE("custom nonlinearities") {
    auto j = simulate_json();
    j["spec"]["nonlinearity"] = json::parse(R"({
      "conservative": [{"coefficient": 2.0, "power": 2}],
      "monomials": [{"coefficient": -1.0, "factors": [{"alpha": [0], "power": 1}, {"alpha": [1], "power": 1}]}]
    })");
    const auto c = parse_simulate(j);
    CHECK(c.spec.label == "custom");
    CHECK(c.spec.model.term_count() == 2);
    j["spec"]["nonlinearity"]["monomials"][0]["factors"][1]["alpha"] = json::array({4});
    CHECK_THROWS_AS(parse_simulate(j), ValidationError);  // |alpha| > 2n - 1
  }

  TEST_CASE("rationals") {
    CHECK(parse_rational(json("1/2"), "x") == Rational(1, 2));
    CHECK(parse_rational(json(3), "x") == Rational(3));
    CHECK_THROWS_AS(parse_rational(json("1/0"), "x"), ValidationError);
    CHECK_THROWS_AS(parse_rational(json("half"), "x"), ValidationError);
    CHECK_THROWS_AS(parse_rational(json(0.5), "x"), ValidationError);
  }

  TEST_CASE("bad JSON text is a validation error") {
    const auto dir = scratch("json");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{\"schema_version\": 1,";
    CHECK_THROWS_AS(load_json((dir / "bad.json").string()), ValidationError);
    CHECK_THROWS_AS(load_json((dir / "missing.json").string()), ValidationError);
    fs::remove_all(dir);
  }
}
