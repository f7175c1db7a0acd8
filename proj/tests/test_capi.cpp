// Exercises the shared library through its C header only.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "savsim/savsim.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("savsim_capi_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::strlen(savsim_version()) > 0);
  savsim_network* net = nullptr;
  CHECK(savsim_network_load("/nonexistent.json", &net) == SAVSIM_ERR_IO);
  CHECK(net == nullptr);
  CHECK(std::string(savsim_last_error()).find("/nonexistent.json") != std::string::npos);
  CHECK(savsim_network_load(nullptr, &net) == SAVSIM_ERR_NULL_ARGUMENT);
  savsim_network_free(nullptr);
  savsim_scenario_free(nullptr);
  savsim_string_free(nullptr);
}

TEST_CASE("generate, validate, oracle-check") {
  TempDir dir;
  savsim_synthetic_spec spec;
  savsim_synthetic_spec_default(&spec);
  CHECK(spec.width == 14484.0);
  CHECK(spec.height == 12875.0);
  REQUIRE(savsim_generate(&spec, dir.path.string().c_str()) == SAVSIM_OK);
  const std::string network = (dir.path / "network.json").string();

  char* report = nullptr;
  size_t violations = 99;
  REQUIRE(savsim_validate_file(network.c_str(), &report, &violations) == SAVSIM_OK);
  CHECK(violations == 0);
  savsim_string_free(report);

  savsim_network* net = nullptr;
  REQUIRE(savsim_network_load(network.c_str(), &net) == SAVSIM_OK);
  const size_t m = savsim_network_stop_count(net);
  CHECK(m == 14);
  CHECK(savsim_network_table_size(net) == m * (m - 1));
  int64_t a = 0, b = 0;
  REQUIRE(savsim_network_stop_id(net, 0, &a) == SAVSIM_OK);
  REQUIRE(savsim_network_stop_id(net, 1, &b) == SAVSIM_OK);
  CHECK(savsim_network_stop_id(net, m, &a) == SAVSIM_ERR_NOT_FOUND);
  double meters = 0.0;
  CHECK(savsim_network_stop_distance(net, a, b, &meters) == SAVSIM_OK);
  CHECK(meters > 0.0);
  CHECK(savsim_network_stop_distance(net, a, 12345, &meters) == SAVSIM_ERR_NOT_FOUND);

  size_t mismatches = 99;
  REQUIRE(savsim_network_oracle_check(net, 1e-9, &report, &mismatches) == SAVSIM_OK);
  CHECK(mismatches == 0);
  savsim_string_free(report);
  savsim_network_free(net);

  std::ofstream(dir.path / "oneway.json")
      << R"({"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":100,"y":0}],)"
      << R"("edges":[{"id":0,"source":0,"sink":1,"free_flow_speed":10,"capacity_vehicles":10}],"stops":[]})";
  REQUIRE(savsim_validate_file((dir.path / "oneway.json").string().c_str(), &report, &violations) == SAVSIM_OK);
  CHECK(violations > 0);
  savsim_string_free(report);
  CHECK(savsim_network_load((dir.path / "oneway.json").string().c_str(), &net) == SAVSIM_ERR_CONFIG);
}

TEST_CASE("scenario runs") {
  TempDir dir;
  savsim_synthetic_spec spec;
  savsim_synthetic_spec_default(&spec);
  REQUIRE(savsim_generate(&spec, dir.path.string().c_str()) == SAVSIM_OK);
  const std::string scenario = (dir.path / "scenario.json").string();

  const char* sets[] = {"replications=2", "fleet_size=4"};
  savsim_scenario* sc = nullptr;
  REQUIRE(savsim_scenario_load(scenario.c_str(), sets, 2, &sc) == SAVSIM_OK);
  CHECK(savsim_scenario_set(sc, "policy.missing", "1") == SAVSIM_ERR_INVALID_INPUT);
  CHECK(savsim_scenario_set(sc, "fleet_size", "\"x\"") == SAVSIM_ERR_CONFIG);

  savsim_metrics m;
  REQUIRE(savsim_run_replication(sc, 0, &m) == SAVSIM_OK);
  CHECK(m.fleet_size == 4);
  CHECK(m.trips_completed > 0);
  CHECK(m.capacity_violations == 0);
  CHECK(m.conservation_violations == 0);

  const savsim_run_options opts{2, 1};
  const fs::path out1 = dir.path / "out1", out2 = dir.path / "out2";
  REQUIRE(savsim_run(sc, out1.string().c_str(), &opts) == SAVSIM_OK);
  REQUIRE(savsim_run(sc, out2.string().c_str(), &opts) == SAVSIM_OK);
  for (const char* f : {"records.csv", "aggregate.csv", "events_r0.csv", "events_r1.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(out1 / f));
    CHECK(slurp(out1 / f) == slurp(out2 / f));
  }

  const int fleets[] = {2, 4};
  const char* profiles[] = {"cautious", "aggressive"};
  REQUIRE(savsim_sweep(sc, fleets, 2, profiles, 2, (dir.path / "sw").string().c_str(), nullptr) == SAVSIM_OK);
  const std::string sweep = slurp(dir.path / "sw" / "sweep.csv");
  CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 1 + 2 * 2 * 2);
  const char* unknown[] = {"reckless"};
  CHECK(savsim_sweep(sc, fleets, 2, unknown, 1, (dir.path / "bad").string().c_str(), nullptr) == SAVSIM_ERR_CONFIG);
  CHECK_FALSE(fs::exists(dir.path / "bad" / "sweep.csv"));
  savsim_scenario_free(sc);

  const char* bad[] = {"nope=1"};
  CHECK(savsim_scenario_load(scenario.c_str(), bad, 1, &sc) == SAVSIM_ERR_INVALID_INPUT);
  CHECK(sc == nullptr);
}
