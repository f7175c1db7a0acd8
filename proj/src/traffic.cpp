#include "savsim/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "savsim/error.hpp"

namespace savsim {

void BehaviorProfile::validate() const {
  if (!(speed_factor > 0.0) || !std::isfinite(speed_factor)) {
    fail(ErrorCode::config, "profile '" + name + "' speed_factor must be positive");
  }
  if (!(dwell_time >= 0.0) || !std::isfinite(dwell_time)) {
    fail(ErrorCode::config, "profile '" + name + "' dwell_time must be non-negative");
  }
}

BehaviorProfile cautious_profile() { return {"cautious", 0.85, 20.0}; }
BehaviorProfile normal_profile() { return {"normal", 1.00, 12.0}; }
BehaviorProfile aggressive_profile() { return {"aggressive", 1.10, 8.0}; }

std::vector<BehaviorProfile> default_profiles() {
  return {cautious_profile(), normal_profile(), aggressive_profile()};
}

void check_profile_ordering(const std::vector<BehaviorProfile>& profiles) {
  auto find = [&](std::string_view name) -> const BehaviorProfile& {
    for (const auto& p : profiles) {
      if (p.name == name) return p;
    }
    fail(ErrorCode::config, "missing behavior profile '" + std::string(name) + "'");
  };
  for (const auto& p : profiles) p.validate();
  const double c = find("cautious").speed_factor;
  const double n = find("normal").speed_factor;
  const double a = find("aggressive").speed_factor;
  if (!(c < n && n < a)) {
    fail(ErrorCode::config, "behavior profiles must satisfy cautious < normal < aggressive");
  }
}

double edge_speed(const DirectedEdge& edge, int occupancy) {
  const double ratio = static_cast<double>(std::max(occupancy, 0)) / edge.capacity_vehicles;
  return edge.free_flow_speed * std::max(kCrawlFraction, 1.0 - ratio);
}

double effective_speed(const DirectedEdge& edge, int occupancy, const BehaviorProfile& profile) {
  return std::min(edge.free_flow_speed, edge_speed(edge, occupancy) * profile.speed_factor);
}

double edge_travel_time(const DirectedEdge& edge, int occupancy, const BehaviorProfile& profile) {
  return edge.length / effective_speed(edge, occupancy, profile);
}

bool count_stop_event(double previous_speed, double new_speed) {
  return previous_speed >= kStopThreshold && new_speed < kStopThreshold;
}

void BackgroundFlow::validate(const RoadGraph& graph) const {
  if (!graph.has_vertex(origin) || !graph.has_vertex(destination)) {
    fail(ErrorCode::config, "background flow references an unknown vertex");
  }
  if (origin == destination) {
    fail(ErrorCode::config, "background flow origin equals destination");
  }
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    fail(ErrorCode::config, "background flow rate must be non-negative");
  }
}

}  // namespace savsim
