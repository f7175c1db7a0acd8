#include "savsim/dispatch.hpp"

#include <algorithm>
#include <cmath>

#include "savsim/error.hpp"

namespace savsim {

int Sav::onboard_total() const {
  int total = 0;
  for (const OnboardParty& p : onboard) total += p.party_size;
  return total;
}

bool Sav::carries(RequestId request) const {
  return std::any_of(onboard.begin(), onboard.end(),
                     [request](const OnboardParty& p) { return p.request == request; });
}

void DispatchPolicy::validate() const {
  if (!(overdue_threshold > 0.0)) fail(ErrorCode::config, "policy.overdue_threshold must be positive");
  if (!(priority_radius > 0.0)) fail(ErrorCode::config, "policy.priority_radius must be positive");
  if (!(detour_budget_factor >= 1.0)) {
    fail(ErrorCode::config, "policy.detour_budget_factor must be at least 1");
  }
  if (capacity < 1) fail(ErrorCode::config, "policy.capacity must be at least 1");
}

std::string_view to_string(RequestState state) {
  switch (state) {
    case RequestState::unassigned:
      return "unassigned";
    case RequestState::assigned:
      return "assigned";
    case RequestState::onboard:
      return "onboard";
    case RequestState::completed:
      return "completed";
  }
  return "unknown";
}

void PendingRequest::advance(RequestState next) {
  const bool legal = (state == RequestState::unassigned && next == RequestState::assigned) ||
                     (state == RequestState::assigned && next == RequestState::onboard) ||
                     (state == RequestState::onboard && next == RequestState::completed);
  if (!legal) {
    fail(ErrorCode::internal, "request " + std::to_string(request.id.value) + " cannot move from " +
                                  std::string(to_string(state)) + " to " +
                                  std::string(to_string(next)));
  }
  state = next;
}

std::optional<RequestId> select_next_request(const DispatchPolicy& policy,
                                             std::span<const PendingRequest> pending,
                                             const Sav& sav, double now,
                                             const DistanceModel& distances) {
  const PendingRequest* overdue = nullptr;
  const PendingRequest* earliest = nullptr;
  for (const PendingRequest& p : pending) {
    if (p.state != RequestState::unassigned) continue;
    const RequestId id = p.request.id;

    if (!earliest || p.request.request_time < earliest->request.request_time ||
        (p.request.request_time == earliest->request.request_time && id < earliest->request.id)) {
      earliest = &p;
    }

    const double waited = now - p.wait_start;
    if (waited <= policy.overdue_threshold) continue;
    if (distances.from_position(sav.position, p.request.origin) > policy.priority_radius) continue;
    if (!overdue) {
      overdue = &p;
      continue;
    }
    const double best_wait = now - overdue->wait_start;
    if (waited > best_wait || (waited == best_wait && id < overdue->request.id)) overdue = &p;
  }
  if (overdue) return overdue->request.id;
  if (earliest) return earliest->request.id;
  return std::nullopt;
}

double route_length(const Sav& sav, std::span<const RouteLeg> legs, const DistanceModel& distances) {
  if (legs.empty()) return 0.0;
  double total = distances.from_position(sav.position, legs.front().stop);
  for (std::size_t i = 1; i < legs.size(); ++i) total += distances.between(legs[i - 1].stop, legs[i].stop);
  return total;
}

double shared_distance(const Sav& sav, std::span<const RouteLeg> legs,
                       const DistanceModel& distances) {
  // Onboard requests are distinct by construction, so the count of parties
  // is the count of distinct requests.
  int riding = static_cast<int>(sav.onboard.size());
  double shared = 0.0;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const double hop = i == 0 ? distances.from_position(sav.position, legs[0].stop)
                              : distances.between(legs[i - 1].stop, legs[i].stop);
    if (riding >= 2) shared += hop;
    riding += legs[i].action == LegAction::pickup ? 1 : -1;
  }
  return shared;
}

bool route_feasible(const Sav& sav, std::span<const RouteLeg> legs) {
  int load = sav.onboard_total();
  if (load > sav.capacity) return false;
  std::vector<RequestId> picked;
  for (const RouteLeg& leg : legs) {
    if (leg.action == LegAction::pickup) {
      load += leg.party_size;
      if (load > sav.capacity) return false;
      picked.push_back(leg.request);
    } else {
      const bool was_picked =
          sav.carries(leg.request) ||
          std::find(picked.begin(), picked.end(), leg.request) != picked.end();
      if (!was_picked) return false;
      load -= leg.party_size;
    }
  }
  return true;
}

std::optional<Insertion> try_insert_shared(const DispatchPolicy& policy, const Sav& sav,
                                           const TripRequest& candidate,
                                           const DistanceModel& distances) {
  const std::span<const RouteLeg> current(sav.route);
  const double base = route_length(sav, current, distances);
  const double budget = policy.detour_budget_factor * base;
  const RouteLeg pickup{candidate.origin, LegAction::pickup, candidate.id, candidate.party_size};
  const RouteLeg dropoff{candidate.destination, LegAction::dropoff, candidate.id,
                         candidate.party_size};

  std::optional<Insertion> best;
  std::vector<RouteLeg> trial;
  const std::size_t n = current.size();
  // Pickup goes before old leg i, dropoff before old leg j (i <= j <= n).
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i; j <= n; ++j) {
      trial.clear();
      trial.insert(trial.end(), current.begin(), current.begin() + static_cast<std::ptrdiff_t>(i));
      trial.push_back(pickup);
      trial.insert(trial.end(), current.begin() + static_cast<std::ptrdiff_t>(i),
                   current.begin() + static_cast<std::ptrdiff_t>(j));
      trial.push_back(dropoff);
      trial.insert(trial.end(), current.begin() + static_cast<std::ptrdiff_t>(j), current.end());

      if (!route_feasible(sav, trial)) continue;
      const double length = route_length(sav, trial, distances);
      if (length > budget) continue;
      const double shared = shared_distance(sav, trial, distances);
      if (best && (shared < best->shared || (shared == best->shared && length >= best->length))) {
        continue;
      }
      best = Insertion{trial, i, j + 1, shared, length, base};
    }
  }
  return best;
}

ArrivalOutcome on_arrival(Sav& sav, PendingRequest& request, const BehaviorProfile& profile,
                          double now) {
  if (sav.route.empty()) fail(ErrorCode::internal, "arrival with an empty route");
  const RouteLeg leg = sav.route.front();
  if (leg.request != request.request.id) {
    fail(ErrorCode::internal, "arrival leg does not belong to request " +
                                  std::to_string(request.request.id.value));
  }
  const std::string who = "request " + std::to_string(leg.request.value);
  if (leg.action == LegAction::pickup) {
    if (request.state != RequestState::assigned) {
      fail(ErrorCode::internal, who + " is not waiting for pickup (state " +
                                    std::string(to_string(request.state)) + ")");
    }
    request.advance(RequestState::onboard);
    sav.onboard.push_back(OnboardParty{leg.request, leg.party_size});
  } else {
    auto it = std::find_if(sav.onboard.begin(), sav.onboard.end(),
                           [&](const OnboardParty& p) { return p.request == leg.request; });
    if (it == sav.onboard.end() || request.state != RequestState::onboard) {
      fail(ErrorCode::internal, who + " is not onboard for dropoff");
    }
    request.advance(RequestState::completed);
    sav.onboard.erase(it);
  }
  sav.route.erase(sav.route.begin());
  sav.status = SavStatus::dwelling;
  return ArrivalOutcome{leg.action, leg.request, leg.party_size, now + profile.dwell_time};
}

}  // namespace savsim
