#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "savsim/demand.hpp"
#include "savsim/engine.hpp"
#include "savsim/netgraph.hpp"
#include "savsim/traffic.hpp"

namespace savsim {

// Rectangular grid-with-ring city: peripheral housing stops on the outer
// ring, opportunity stops in the middle third of both dimensions.
struct SyntheticSpec {
  double width = 14484.0;   // 9 miles
  double height = 12875.0;  // 8 miles
  double grid_spacing = 1600.0;
  int peripheral_stop_count = 8;
  int central_stop_count = 6;
  std::uint64_t seed = 1;
  double free_flow_speed = 17.88;  // 40 mph
  double vehicle_spacing = 8.0;    // meters of road per vehicle at jam density

  void validate() const;
  int columns() const;  // grid intervals along x
  int rows() const;     // grid intervals along y
};

// Bidirectional grid only, without stops.
RoadGraph generate_grid(const SyntheticSpec& spec);

struct SyntheticNetwork {
  RoadGraph graph;
  DemandProfile demand;
  std::vector<BackgroundFlow> background_flows;
};

// Grid plus zone-tagged stops, default demand and background flows. Throws
// invalid_input when the grid cannot host the requested stops.
SyntheticNetwork generate_network(const SyntheticSpec& spec);

// Demand that stresses the default fleet sweep: outbound-heavy morning
// demand over the first three hours of a four-hour run.
DemandProfile default_demand_profile();

// Scenario for a generated network written next to it as `network_file`.
ScenarioConfig default_scenario(const SyntheticNetwork& network, const std::string& network_file);

// Maximum shortest-path distance over all ordered vertex pairs.
double graph_diameter(const RoadGraph& graph);

}  // namespace savsim
