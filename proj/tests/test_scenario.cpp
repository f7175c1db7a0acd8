#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "savsim/error.hpp"
#include "savsim/network_io.hpp"
#include "savsim/scenario_gen.hpp"
#include "savsim/scenario_io.hpp"

using namespace savsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("savsim_scenario_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

double center_distance(const RoadGraph& g, const Stop& s, const SyntheticSpec& spec) {
  const DirectedEdge& e = g.edge(s.edge);
  const Vertex& a = g.vertex(e.source);
  const Vertex& b = g.vertex(e.sink);
  const double t = s.slack / e.length;
  const double x = a.x + t * (b.x - a.x) - spec.width / 2;
  const double y = a.y + t * (b.y - a.y) - spec.height / 2;
  return std::hypot(x, y);
}

}  // namespace

TEST_CASE("synthetic defaults") {
  const SyntheticSpec spec;
  CHECK(spec.width == 14484.0);
  CHECK(spec.height == 12875.0);
  CHECK(spec.grid_spacing == 1600.0);
  CHECK(spec.peripheral_stop_count == 8);
  CHECK(spec.central_stop_count == 6);

  const SyntheticNetwork net = generate_network(spec);
  double max_x = 0.0, max_y = 0.0, min_x = 1e9, min_y = 1e9;
  for (const Vertex& v : net.graph.vertices()) {
    max_x = std::max(max_x, v.x);
    max_y = std::max(max_y, v.y);
    min_x = std::min(min_x, v.x);
    min_y = std::min(min_y, v.y);
  }
  CHECK(max_x - min_x == 14484.0);
  CHECK(max_y - min_y == 12875.0);
  CHECK(validate_graph(net.graph).ok());
  CHECK(graph_diameter(net.graph) >= 14484.0);

  // Diameter against a plain Floyd-Warshall pass.
  const std::size_t n = net.graph.vertices().size();
  std::vector<double> d(n * n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const DirectedEdge& e : net.graph.edges()) {
    const std::size_t a = net.graph.vertex_index(e.source), b = net.graph.vertex_index(e.sink);
    d[a * n + b] = std::min(d[a * n + b], e.length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
  CHECK(graph_diameter(net.graph) == doctest::Approx(*std::max_element(d.begin(), d.end())).epsilon(1e-12));

  int peripheral = 0, central = 0;
  double closest_peripheral = 1e18, farthest_central = 0.0;
  for (const Stop& s : net.graph.stops()) {
    const double r = center_distance(net.graph, s, spec);
    if (s.zone == Zone::peripheral_housing) {
      ++peripheral;
      closest_peripheral = std::min(closest_peripheral, r);
    } else {
      REQUIRE(s.zone == Zone::central_opportunity);
      ++central;
      farthest_central = std::max(farthest_central, r);
    }
  }
  CHECK(peripheral == 8);
  CHECK(central == 6);
  CHECK(closest_peripheral > farthest_central);

  for (const DirectedEdge& e : net.graph.edges()) {
    CHECK(e.free_flow_speed == 17.88);
    CHECK(e.capacity_vehicles == std::max(1, static_cast<int>(std::lround(e.length / 8.0))));
  }
}

TEST_CASE("synthetic stops lie in their zones") {
  SyntheticSpec spec;
  spec.seed = 9;
  const SyntheticNetwork net = generate_network(spec);
  for (const Stop& s : net.graph.stops()) {
    const DirectedEdge& e = net.graph.edge(s.edge);
    const Vertex& a = net.graph.vertex(e.source);
    const Vertex& b = net.graph.vertex(e.sink);
    const double t = s.slack / e.length;
    const double x = a.x + t * (b.x - a.x), y = a.y + t * (b.y - a.y);
    if (s.zone == Zone::peripheral_housing) {
      CHECK((x == 0.0 || y == 0.0 || x == spec.width || y == spec.height));
    } else {
      CHECK(x >= spec.width / 3 - 1e-6);
      CHECK(x <= 2 * spec.width / 3 + 1e-6);
      CHECK(y >= spec.height / 3 - 1e-6);
      CHECK(y <= 2 * spec.height / 3 + 1e-6);
    }
  }
}

TEST_CASE("synthetic determinism and errors") {
  SyntheticSpec spec;
  spec.seed = 3;
  CHECK(network_to_json(generate_network(spec).graph).dump() ==
        network_to_json(generate_network(spec).graph).dump());
  SyntheticSpec other = spec;
  other.seed = 4;
  CHECK(network_to_json(generate_network(other).graph).dump() !=
        network_to_json(generate_network(spec).graph).dump());

  SyntheticSpec tiny;
  tiny.width = tiny.height = tiny.grid_spacing = 1000.0;
  const RoadGraph grid = generate_grid(tiny);
  CHECK(grid.vertices().size() == 4);
  CHECK(grid.edges().size() == 8);
  CHECK(validate_graph(grid).ok());
  CHECK_THROWS_AS(generate_network(tiny), Error);

  SyntheticSpec crowded;
  crowded.peripheral_stop_count = 1000;
  CHECK_THROWS_AS(generate_network(crowded), Error);
  SyntheticSpec bad;
  bad.grid_spacing = 0.0;
  CHECK_THROWS_AS(generate_grid(bad), Error);
  bad = SyntheticSpec{};
  bad.central_stop_count = 0;
  CHECK_THROWS_AS(generate_network(bad), Error);
}

TEST_CASE("scenario JSON round trip and overrides") {
  TempDir dir;
  const SyntheticNetwork net = generate_network(SyntheticSpec{});
  const ScenarioConfig c = default_scenario(net, "network.json");
  save_network(net.graph, dir.path / "network.json");
  save_scenario(c, dir.path / "scenario.json");

  const ScenarioConfig back = load_scenario(dir.path / "scenario.json");
  CHECK(scenario_to_json(back) == scenario_to_json(c));
  CHECK(back.base_dir == dir.path);
  CHECK(back.replications == 20);
  CHECK(back.policy.overdue_threshold == 1200.0);

  const ScenarioConfig changed =
      load_scenario(dir.path / "scenario.json",
                    {"policy.overdue_threshold=900", "label=other", "profiles.cautious.dwell_time=25",
                     "background_flows.0.rate=12.5", "demand.party_size_weights=[1,0,0]"});
  CHECK(changed.policy.overdue_threshold == 900.0);
  CHECK(changed.label == "other");
  CHECK(changed.behavior("cautious").dwell_time == 25.0);
  CHECK(changed.background_flows.at(0).rate == 12.5);
  CHECK(changed.demand.party_size_weights[0] == 1.0);

  CHECK_THROWS_AS(load_scenario(dir.path / "scenario.json", {"policy.nope=1"}), Error);
  CHECK_THROWS_AS(load_scenario(dir.path / "scenario.json", {"background_flows.9.rate=1"}), Error);
  CHECK_THROWS_AS(load_scenario(dir.path / "scenario.json", {"no_equals_sign"}), Error);
  CHECK_THROWS_AS(load_scenario(dir.path / "scenario.json", {"fleet_size=many"}), Error);

  std::ofstream(dir.path / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_scenario(dir.path / "broken.json"), Error);
  try {
    load_scenario(dir.path / "missing.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}

TEST_CASE("minimal scenario document takes defaults") {
  const ScenarioConfig c = scenario_from_json(nlohmann::json::parse(R"({"network": "n.json"})"));
  CHECK(c.replications == 20);
  CHECK(c.fleet_size == 8);
  CHECK(c.profile == "normal");
  CHECK(c.demand.horizon == c.horizon);
}
