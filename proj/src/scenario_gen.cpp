#include "savsim/scenario_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "savsim/error.hpp"

namespace savsim {

void SyntheticSpec::validate() const {
  if (!(width > 0.0) || !(height > 0.0) || !(grid_spacing > 0.0)) {
    fail(ErrorCode::invalid_input, "width, height and grid_spacing must be positive");
  }
  if (peripheral_stop_count < 1 || central_stop_count < 1) {
    fail(ErrorCode::invalid_input, "stop counts must be at least 1");
  }
  if (!(free_flow_speed > 0.0) || !(vehicle_spacing > 0.0)) {
    fail(ErrorCode::invalid_input, "free_flow_speed and vehicle_spacing must be positive");
  }
}

int SyntheticSpec::columns() const {
  return std::max(1, static_cast<int>(std::lround(width / grid_spacing)));
}

int SyntheticSpec::rows() const {
  return std::max(1, static_cast<int>(std::lround(height / grid_spacing)));
}

namespace {

VertexId grid_vertex(const SyntheticSpec& spec, int i, int j) {
  return VertexId{static_cast<std::int64_t>(j) * (spec.columns() + 1) + i};
}

}  // namespace

RoadGraph generate_grid(const SyntheticSpec& spec) {
  spec.validate();
  const int nx = spec.columns();
  const int ny = spec.rows();
  RoadGraph graph;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      graph.add_vertex(grid_vertex(spec, i, j), spec.width * i / nx, spec.height * j / ny);
    }
  }
  std::int64_t next_edge = 0;
  auto connect = [&](VertexId a, VertexId b) {
    const double length = edge_weight(graph.vertex(a), graph.vertex(b));
    const int capacity = std::max(1, static_cast<int>(std::lround(length / spec.vehicle_spacing)));
    graph.add_edge(EdgeId{next_edge++}, a, b, spec.free_flow_speed, capacity);
    graph.add_edge(EdgeId{next_edge++}, b, a, spec.free_flow_speed, capacity);
  };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      if (i < nx) connect(grid_vertex(spec, i, j), grid_vertex(spec, i + 1, j));
      if (j < ny) connect(grid_vertex(spec, i, j), grid_vertex(spec, i, j + 1));
    }
  }
  return graph;
}

DemandProfile default_demand_profile() {
  DemandProfile d;
  d.outbound_rate = 20.0;
  d.inbound_rate = 8.0;
  d.party_size_weights = {0.7, 0.2, 0.1};
  d.horizon = 3 * 3600.0;
  return d;
}

SyntheticNetwork generate_network(const SyntheticSpec& spec) {
  SyntheticNetwork net{generate_grid(spec), default_demand_profile(), {}};
  RoadGraph& graph = net.graph;
  const int nx = spec.columns();
  const int ny = spec.rows();
  std::mt19937_64 rng(spec.seed);

  auto near = [](double a, double b) { return std::abs(a - b) < 1e-6; };
  auto on_ring = [&](const DirectedEdge& e) {
    const Vertex& a = graph.vertex(e.source);
    const Vertex& b = graph.vertex(e.sink);
    return (near(a.y, 0.0) && near(b.y, 0.0)) || (near(a.y, spec.height) && near(b.y, spec.height)) ||
           (near(a.x, 0.0) && near(b.x, 0.0)) || (near(a.x, spec.width) && near(b.x, spec.width));
  };

  // Parameter interval [lo, hi] of the edge lying inside the middle third.
  const double x0 = spec.width / 3.0, x1 = 2.0 * spec.width / 3.0;
  const double y0 = spec.height / 3.0, y1 = 2.0 * spec.height / 3.0;
  auto clip_center = [&](const DirectedEdge& e, double& lo, double& hi) {
    const Vertex& a = graph.vertex(e.source);
    const Vertex& b = graph.vertex(e.sink);
    lo = 0.0;
    hi = 1.0;
    auto clip = [&](double p, double d, double min, double max) {
      if (d == 0.0) {
        if (p < min || p > max) hi = -1.0;
        return;
      }
      double t0 = (min - p) / d, t1 = (max - p) / d;
      if (t0 > t1) std::swap(t0, t1);
      lo = std::max(lo, t0);
      hi = std::min(hi, t1);
    };
    clip(a.x, b.x - a.x, x0, x1);
    clip(a.y, b.y - a.y, y0, y1);
    return hi - lo > 1e-6;
  };

  std::vector<std::size_t> ring;
  std::vector<std::size_t> central;
  for (std::size_t k = 0; k < graph.edges().size(); ++k) {
    const DirectedEdge& e = graph.edges()[k];
    double lo, hi;
    if (on_ring(e)) ring.push_back(k);
    if (!on_ring(e) && clip_center(e, lo, hi)) central.push_back(k);
  }
  if (static_cast<int>(ring.size()) < spec.peripheral_stop_count) {
    fail(ErrorCode::invalid_input, "grid ring has too few edges for the peripheral stops");
  }
  if (static_cast<int>(central.size()) < spec.central_stop_count) {
    fail(ErrorCode::invalid_input,
         "grid has too few edges in the central third for the opportunity stops (" +
             std::to_string(central.size()) + " available, " +
             std::to_string(spec.central_stop_count) + " requested; " + std::to_string(nx) + "x" +
             std::to_string(ny) + " cells)");
  }
  std::shuffle(ring.begin(), ring.end(), rng);
  std::shuffle(central.begin(), central.end(), rng);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < spec.peripheral_stop_count; ++k) {
    const DirectedEdge& e = graph.edges()[ring[static_cast<std::size_t>(k)]];
    const double t = 0.25 + 0.5 * unit(rng);
    graph.place_stop(e.id, t * e.length, Zone::peripheral_housing);
  }
  for (int k = 0; k < spec.central_stop_count; ++k) {
    const DirectedEdge& e = graph.edges()[central[static_cast<std::size_t>(k)]];
    double lo, hi;
    clip_center(e, lo, hi);
    const double span = hi - lo;
    const double t = lo + span * (0.1 + 0.8 * unit(rng));
    graph.place_stop(e.id, t * e.length, Zone::central_opportunity);
  }

  // Cross-town corridors through the middle of the grid, both directions.
  const VertexId west = grid_vertex(spec, 0, ny / 2);
  const VertexId east = grid_vertex(spec, nx, ny / 2);
  const VertexId south = grid_vertex(spec, nx / 2, 0);
  const VertexId north = grid_vertex(spec, nx / 2, ny);
  for (auto [a, b] : {std::pair{west, east}, {east, west}, {south, north}, {north, south}}) {
    if (a != b) net.background_flows.push_back(BackgroundFlow{a, b, 150.0});
  }
  return net;
}

ScenarioConfig default_scenario(const SyntheticNetwork& network, const std::string& network_file) {
  ScenarioConfig c;
  c.label = "synthetic_grid";
  c.network = network_file;
  c.demand = network.demand;
  c.background_flows = network.background_flows;
  c.fleet_size = 8;
  c.profile = "normal";
  c.horizon = 4 * 3600.0;
  c.replications = 20;
  c.base_seed = 1;
  return c;
}

double graph_diameter(const RoadGraph& graph) {
  double diameter = 0.0;
  for (std::size_t s = 0; s < graph.vertices().size(); ++s) {
    for (double d : shortest_distances(graph, s)) diameter = std::max(diameter, d);
  }
  return diameter;
}

}  // namespace savsim
