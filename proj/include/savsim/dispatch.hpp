#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "savsim/demand.hpp"
#include "savsim/ids.hpp"
#include "savsim/netgraph.hpp"
#include "savsim/traffic.hpp"

namespace savsim {

enum class LegAction { pickup, dropoff };

struct RouteLeg {
  StopId stop;
  LegAction action = LegAction::pickup;
  RequestId request;
  int party_size = 1;

  bool operator==(const RouteLeg&) const = default;
};

struct OnboardParty {
  RequestId request;
  int party_size = 1;

  bool operator==(const OnboardParty&) const = default;
};

enum class SavStatus { idle, en_route, dwelling };

struct Sav {
  SavId id;
  int capacity = 5;
  std::string profile = "normal";
  EdgePosition position;
  std::vector<RouteLeg> route;
  std::vector<OnboardParty> onboard;
  SavStatus status = SavStatus::idle;

  int onboard_total() const;
  bool carries(RequestId request) const;
};

struct DispatchPolicy {
  double overdue_threshold = 1200.0;   // seconds
  double priority_radius = 3218.0;     // meters
  double detour_budget_factor = 1.4;
  int capacity = 5;

  void validate() const;
};

enum class RequestState { unassigned, assigned, onboard, completed };

std::string_view to_string(RequestState state);

struct PendingRequest {
  TripRequest request;
  double wait_start = 0.0;
  RequestState state = RequestState::unassigned;

  explicit PendingRequest(const TripRequest& r) : request(r), wait_start(r.request_time) {}

  // Moves one step along unassigned -> assigned -> onboard -> completed;
  // any other transition throws internal.
  void advance(RequestState next);
};

// Two-tier choice among unassigned requests: overdue requests whose pickup
// lies within the priority radius of the vehicle go first (longest wait, then
// smallest id); otherwise earliest request time, then smallest id.
std::optional<RequestId> select_next_request(const DispatchPolicy& policy,
                                             std::span<const PendingRequest> pending,
                                             const Sav& sav, double now,
                                             const DistanceModel& distances);

// Total distance to drive `legs` in order starting at the vehicle's position.
double route_length(const Sav& sav, std::span<const RouteLeg> legs, const DistanceModel& distances);

// Distance driven while at least two distinct requests are onboard.
double shared_distance(const Sav& sav, std::span<const RouteLeg> legs,
                       const DistanceModel& distances);

// Whether the route keeps onboard load within capacity at every leg and
// places each pickup before its dropoff.
bool route_feasible(const Sav& sav, std::span<const RouteLeg> legs);

struct Insertion {
  std::vector<RouteLeg> route;
  std::size_t pickup_index = 0;   // position of the new pickup in `route`
  std::size_t dropoff_index = 0;  // position of the new dropoff in `route`
  double shared = 0.0;
  double length = 0.0;
  double base_length = 0.0;
};

// Best insertion of the candidate's pickup/dropoff pair into the vehicle's
// route: feasible for capacity, within the detour budget, maximizing shared
// distance; ties go to the shorter route, then the earliest positions.
// Returns nullopt when no insertion qualifies. `sav` is never modified.
std::optional<Insertion> try_insert_shared(const DispatchPolicy& policy, const Sav& sav,
                                           const TripRequest& candidate,
                                           const DistanceModel& distances);

struct ArrivalOutcome {
  LegAction action = LegAction::pickup;
  RequestId request;
  int party_size = 0;
  double departure_time = 0.0;  // end of dwell
};

// Serves the leg at the front of the vehicle's route: boards or alights the
// party, advances the request state and starts the dwell. Throws internal
// when the request is not in the state the leg expects.
ArrivalOutcome on_arrival(Sav& sav, PendingRequest& request, const BehaviorProfile& profile,
                          double now);

}  // namespace savsim
