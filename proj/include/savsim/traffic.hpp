#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "savsim/ids.hpp"
#include "savsim/netgraph.hpp"

namespace savsim {

// Fraction of free-flow speed a saturated edge still allows.
inline constexpr double kCrawlFraction = 0.05;
// A vehicle "stops" when its speed drops below walking pace (m/s).
inline constexpr double kStopThreshold = 1.0;

struct BehaviorProfile {
  std::string name;
  double speed_factor = 1.0;
  double dwell_time = 0.0;  // seconds per boarding or alighting event

  void validate() const;
};

BehaviorProfile cautious_profile();
BehaviorProfile normal_profile();
BehaviorProfile aggressive_profile();

// The three named profiles, ordered cautious < normal < aggressive.
std::vector<BehaviorProfile> default_profiles();

// Throws config unless the set holds cautious, normal and aggressive with
// strictly increasing speed factors.
void check_profile_ordering(const std::vector<BehaviorProfile>& profiles);

// Greenshields speed with a crawl floor:
// v_free * max(crawl, 1 - occupancy / capacity).
double edge_speed(const DirectedEdge& edge, int occupancy);

// Speed a vehicle of the given profile attains, capped at free flow.
double effective_speed(const DirectedEdge& edge, int occupancy, const BehaviorProfile& profile);

double edge_travel_time(const DirectedEdge& edge, int occupancy, const BehaviorProfile& profile);

bool count_stop_event(double previous_speed, double new_speed);

struct BackgroundFlow {
  VertexId origin;
  VertexId destination;
  double rate = 0.0;  // vehicles/hour

  void validate(const RoadGraph& graph) const;
};

}  // namespace savsim
