#include "savsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <random>
#include <thread>
#include <unordered_map>

#include "savsim/error.hpp"
#include "savsim/network_io.hpp"

namespace savsim {

std::filesystem::path ScenarioConfig::resolve(const std::filesystem::path& p) const {
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

const BehaviorProfile& ScenarioConfig::behavior(const std::string& name) const {
  for (const BehaviorProfile& p : profiles) {
    if (p.name == name) return p;
  }
  fail(ErrorCode::config, "unknown behavior profile '" + name + "'");
}

NetworkModel::NetworkModel(RoadGraph graph) : graph_(std::move(graph)) {
  const ValidationReport report = validate_graph(graph_);
  if (!report.ok()) fail(ErrorCode::config, "network failed validation:\n" + report.to_string());
  router_ = std::make_unique<Router>(graph_);
}

PreparedScenario prepare_scenario(ScenarioConfig config,
                                  std::shared_ptr<const NetworkModel> network) {
  if (config.fleet_size < 0) fail(ErrorCode::config, "fleet_size must be non-negative");
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
    fail(ErrorCode::config, "horizon must be positive");
  }
  if (config.replications < 1) fail(ErrorCode::config, "replications must be at least 1");
  if (config.occupancy_sample_interval < 0.0) {
    fail(ErrorCode::config, "occupancy_sample_interval must be non-negative");
  }
  config.policy.validate();
  check_profile_ordering(config.profiles);
  config.behavior(config.profile);
  try {
    config.demand.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("demand: ") + e.what());
  }

  if (!network) {
    if (config.network.empty()) fail(ErrorCode::config, "scenario names no network file");
    auto graph = [&] {
      try {
        return read_network_file(config.resolve(config.network));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::io) throw;
        fail(ErrorCode::config, e.what());
      }
    }();
    network = std::make_shared<const NetworkModel>(std::move(graph));
  }
  const RoadGraph& graph = network->graph();
  if (config.fleet_size > 0 && graph.stops().empty()) {
    fail(ErrorCode::config, "a fleet needs at least one stop to start from");
  }
  for (const BackgroundFlow& f : config.background_flows) f.validate(graph);

  PreparedScenario prepared{std::move(config), std::move(network), std::nullopt};
  if (prepared.config.requests_file) {
    try {
      prepared.fixed_requests =
          load_requests(prepared.config.resolve(*prepared.config.requests_file), graph);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::io) throw;
      fail(ErrorCode::config, e.what());
    }
  } else {
    // Surface zone problems before any replication starts.
    try {
      generate_requests(prepared.config.demand, graph.stops(), prepared.config.base_seed);
    } catch (const Error& e) {
      fail(ErrorCode::config, std::string("demand: ") + e.what());
    }
  }
  return prepared;
}

void RunDiagnostics::merge(const RunDiagnostics& o) {
  events_processed += o.events_processed;
  state_checks += o.state_checks;
  capacity_violations += o.capacity_violations;
  conservation_violations += o.conservation_violations;
  route_violations += o.route_violations;
  time_order_violations += o.time_order_violations;
  background_injected += o.background_injected;
  background_exited += o.background_exited;
  background_in_network += o.background_in_network;
  requests_generated += o.requests_generated;
  requests_unassigned += o.requests_unassigned;
  requests_assigned += o.requests_assigned;
  requests_onboard += o.requests_onboard;
  requests_completed += o.requests_completed;
  event_trace_hash = event_trace_hash * 1099511628211ULL ^ o.event_trace_hash;
}

std::uint64_t replication_seed(const ScenarioConfig& config, int index, const RunOptions& options) {
  return options.identical_seeds ? config.base_seed
                                 : config.base_seed + static_cast<std::uint64_t>(index);
}

namespace {

enum class EventKind : std::uint8_t {
  request_arrival,
  sav_edge_exit,
  sav_arrival_at_stop,
  dwell_end,
  background_inject,
  background_edge_exit,
  horizon_end,
};

struct Event {
  double time;
  std::uint64_t sequence;
  EventKind kind;
  std::size_t subject;   // request, vehicle or flow index
  std::uint64_t token;   // movement token for vehicle events

  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    return sequence > o.sequence;
  }
};

struct SavRuntime {
  Sav sav;
  const BehaviorProfile* profile = nullptr;

  bool moving = false;
  std::size_t edge = 0;  // index of the edge the vehicle is on
  double start_offset = 0.0;
  double start_time = 0.0;
  double end_offset = 0.0;
  double speed = 0.0;
  std::uint64_t token = 0;

  double last_speed = 0.0;
  double odometer = 0.0;
  double moving_time = 0.0;
  double free_flow_time = 0.0;
  int stops = 0;
  double board_mark = 0.0;
};

struct BackgroundVehicle {
  std::vector<std::size_t> route;
  std::size_t leg = 0;
  double start_time = 0.0;
  double free_flow_time = 0.0;
  double last_speed = 0.0;
  int stops = 0;
};

class Replication {
 public:
  Replication(const PreparedScenario& scenario, int index, const RunOptions& options)
      : config_(scenario.config),
        graph_(scenario.network->graph()),
        router_(scenario.network->router()),
        options_(options),
        index_(index),
        seed_(replication_seed(config_, index, options)),
        occupancy_(graph_.edges().size(), 0),
        background_profile_{"background", 1.0, 0.0} {
    result_.requests = scenario.fixed_requests
                           ? *scenario.fixed_requests
                           : generate_requests(config_.demand, graph_.stops(), seed_);
    std::erase_if(result_.requests,
                  [&](const TripRequest& r) { return !(r.request_time < config_.horizon); });
  }

  ReplicationResult run() {
    push(config_.horizon, EventKind::horizon_end, 0, 0);
    for (std::size_t i = 0; i < result_.requests.size(); ++i) {
      request_index_.emplace(result_.requests[i].id, i);
      push(result_.requests[i].request_time, EventKind::request_arrival, i, 0);
    }
    for (std::size_t f = 0; f < config_.background_flows.size(); ++f) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                        static_cast<std::uint32_t>(100 + f)};
      flow_rngs_.emplace_back(seq);
      schedule_injection(f, 0.0);
    }
    place_fleet();

    next_sample_ = config_.occupancy_sample_interval;
    double last_time = 0.0;
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.time < last_time) ++diag_.time_order_violations;
      last_time = ev.time;
      sample_occupancy_until(ev.time);
      ++diag_.events_processed;
      trace(ev);
      if (ev.kind == EventKind::horizon_end) break;
      dispatch_event(ev);
      if (ev.kind != EventKind::background_inject && ev.kind != EventKind::background_edge_exit) {
        check_state();
      }
    }
    check_state();
    return finish();
  }

 private:
  // -- event plumbing -------------------------------------------------------

  void push(double time, EventKind kind, std::size_t subject, std::uint64_t token) {
    queue_.push(Event{time, next_sequence_++, kind, subject, token});
  }

  void trace(const Event& ev) {
    auto mix = [&](std::uint64_t v) {
      diag_.event_trace_hash ^= v;
      diag_.event_trace_hash *= 1099511628211ULL;
    };
    mix(std::bit_cast<std::uint64_t>(ev.time));
    mix(static_cast<std::uint64_t>(ev.kind));
    mix(ev.subject);
  }

  void dispatch_event(const Event& ev) {
    switch (ev.kind) {
      case EventKind::request_arrival:
        on_request(ev.subject, ev.time);
        break;
      case EventKind::sav_edge_exit:
        if (savs_[ev.subject].token == ev.token) on_edge_exit(savs_[ev.subject], ev.time);
        break;
      case EventKind::sav_arrival_at_stop:
        if (savs_[ev.subject].token == ev.token) on_stop_arrival(savs_[ev.subject], ev.time);
        break;
      case EventKind::dwell_end:
        if (savs_[ev.subject].token == ev.token) on_dwell_end(savs_[ev.subject], ev.time);
        break;
      case EventKind::background_inject:
        on_inject(ev.subject, ev.time);
        break;
      case EventKind::background_edge_exit:
        on_background_exit(ev.subject, ev.time);
        break;
      case EventKind::horizon_end:
        break;
    }
  }

  void log(const SavRuntime& s, double now, LogKind kind, RequestId request, StopId stop) {
    if (!options_.capture_event_log) return;
    result_.event_log.push_back(EventLogEntry{now, s.sav.id, kind, request, stop, s.odometer});
  }

  void sample_occupancy_until(double time) {
    const double step = config_.occupancy_sample_interval;
    if (step <= 0.0) return;
    while (next_sample_ <= time && next_sample_ <= config_.horizon) {
      for (std::size_t e = 0; e < occupancy_.size(); ++e) {
        if (occupancy_[e] > 0) {
          result_.occupancy.push_back(OccupancySample{next_sample_, graph_.edges()[e].id, occupancy_[e]});
        }
      }
      next_sample_ += step;
    }
  }

  // -- fleet ----------------------------------------------------------------

  void place_fleet() {
    std::vector<Stop> stops(graph_.stops().begin(), graph_.stops().end());
    std::sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) { return a.id < b.id; });
    const BehaviorProfile& profile = config_.behavior(config_.profile);
    for (int k = 0; k < config_.fleet_size; ++k) {
      const Stop& home = stops[static_cast<std::size_t>(k) % stops.size()];
      SavRuntime s;
      s.sav.id = SavId{k};
      s.sav.capacity = config_.policy.capacity;
      s.sav.profile = profile.name;
      s.sav.position = EdgePosition{home.edge, home.slack};
      s.sav.status = SavStatus::idle;
      s.profile = &profile;
      s.edge = graph_.edge_index(home.edge);
      savs_.push_back(std::move(s));
    }
  }

  const DirectedEdge& edge_at(std::size_t index) const { return graph_.edges()[index]; }

  // Where the vehicle is right now, without closing its current segment.
  void refresh_position(SavRuntime& s, double now) {
    if (!s.moving) return;
    const double offset = std::min(s.end_offset, s.start_offset + s.speed * (now - s.start_time));
    s.sav.position = EdgePosition{edge_at(s.edge).id, offset};
  }

  void close_segment(SavRuntime& s, double now, bool reached_end) {
    const double offset = reached_end
                              ? s.end_offset
                              : std::min(s.end_offset, s.start_offset + s.speed * (now - s.start_time));
    const double travelled = offset - s.start_offset;
    s.odometer += travelled;
    s.moving_time += now - s.start_time;
    s.free_flow_time += travelled / edge_at(s.edge).free_flow_speed;
    acc_.add_sav_distance(travelled);
    s.sav.position = EdgePosition{edge_at(s.edge).id, offset};
    s.moving = false;
  }

  void begin_segment(SavRuntime& s, double now) {
    const Stop& target = graph_.stop(s.sav.route.front().stop);
    const DirectedEdge& here = edge_at(s.edge);
    const double offset = s.sav.position.offset;
    const bool to_stop = target.edge == here.id && target.slack >= offset;
    s.start_offset = offset;
    s.start_time = now;
    s.end_offset = to_stop ? target.slack : here.length;
    s.moving = true;
    ++s.token;
    const double dt = (s.end_offset - offset) / s.speed;
    push(now + dt, to_stop ? EventKind::sav_arrival_at_stop : EventKind::sav_edge_exit,
         index_of(s), s.token);
  }

  std::size_t index_of(const SavRuntime& s) const { return static_cast<std::size_t>(&s - savs_.data()); }

  // Pulls away from the kerb toward the first leg of the route.
  void depart(SavRuntime& s, double now) {
    s.sav.status = SavStatus::en_route;
    s.speed = effective_speed(edge_at(s.edge), occupancy_[s.edge], *s.profile);
    if (count_stop_event(s.last_speed, s.speed)) ++s.stops;
    s.last_speed = s.speed;
    ++occupancy_[s.edge];
    log(s, now, LogKind::depart, s.sav.route.front().request, s.sav.route.front().stop);
    begin_segment(s, now);
  }

  void on_edge_exit(SavRuntime& s, double now) {
    close_segment(s, now, true);
    --occupancy_[s.edge];
    const Stop& target = graph_.stop(s.sav.route.front().stop);
    const std::size_t at = graph_.vertex_index(edge_at(s.edge).sink);
    const std::size_t target_edge = graph_.edge_index(target.edge);
    const std::size_t entry = graph_.vertex_index(edge_at(target_edge).source);
    const std::size_t next = at == entry ? target_edge : *router_.next_hop(at, entry);
    s.edge = next;
    s.sav.position = EdgePosition{edge_at(next).id, 0.0};
    s.speed = effective_speed(edge_at(next), occupancy_[next], *s.profile);
    if (count_stop_event(s.last_speed, s.speed)) ++s.stops;
    s.last_speed = s.speed;
    ++occupancy_[next];
    begin_segment(s, now);
  }

  void on_stop_arrival(SavRuntime& s, double now) {
    close_segment(s, now, true);
    --occupancy_[s.edge];
    if (count_stop_event(s.last_speed, 0.0)) ++s.stops;
    s.last_speed = 0.0;

    const RouteLeg leg = s.sav.route.front();
    PendingRequest& pending = arrived_[arrived_index_.at(leg.request)];
    if (s.sav.onboard.size() >= 2) acc_.add_shared_distance(s.odometer - s.board_mark);
    s.board_mark = s.odometer;

    const ArrivalOutcome outcome = on_arrival(s.sav, pending, *s.profile, now);
    if (outcome.action == LegAction::pickup) {
      acc_.add_wait(outcome.departure_time - pending.request.request_time);
      log(s, now, LogKind::pickup, leg.request, leg.stop);
    } else {
      acc_.add_completed_trip(outcome.party_size);
      log(s, now, LogKind::dropoff, leg.request, leg.stop);
    }
    ++s.token;
    push(outcome.departure_time, EventKind::dwell_end, index_of(s), s.token);
  }

  void on_dwell_end(SavRuntime& s, double now) {
    if (s.sav.route.empty()) {
      become_idle(s, now);
      return;
    }
    if (s.sav.onboard_total() < s.sav.capacity) {
      if (auto pick = select_next_request(config_.policy, arrived_, s.sav, now, router_)) {
        PendingRequest& candidate = arrived_[arrived_index_.at(*pick)];
        if (auto ins = shared_insertion(s, candidate.request)) {
          apply_insertion(s, candidate, std::move(*ins), now);
        }
      }
    }
    depart(s, now);
  }

  void become_idle(SavRuntime& s, double now) {
    s.sav.status = SavStatus::idle;
    if (auto pick = select_next_request(config_.policy, arrived_, s.sav, now, router_)) {
      assign_direct(s, arrived_[arrived_index_.at(*pick)], now);
    } else {
      log(s, now, LogKind::idle, RequestId{}, StopId{});
    }
  }

  void assign_direct(SavRuntime& s, PendingRequest& p, double now) {
    p.advance(RequestState::assigned);
    --unassigned_;
    const TripRequest& r = p.request;
    s.sav.route = {RouteLeg{r.origin, LegAction::pickup, r.id, r.party_size},
                   RouteLeg{r.destination, LegAction::dropoff, r.id, r.party_size}};
    log(s, now, LogKind::assign, r.id, r.origin);
    depart(s, now);
  }

  // Best insertion, kept only when the request actually rides with another
  // party; appending a disjoint trip would just queue it behind this vehicle.
  // Seats are reserved at assignment, so a vehicle never commits to more
  // passengers than it can carry at once.
  std::optional<Insertion> shared_insertion(const SavRuntime& s, const TripRequest& r) const {
    int committed = s.sav.onboard_total();
    for (const RouteLeg& leg : s.sav.route) {
      if (leg.action == LegAction::pickup) committed += leg.party_size;
    }
    if (committed + r.party_size > s.sav.capacity) return std::nullopt;
    auto ins = try_insert_shared(config_.policy, s.sav, r, router_);
    if (!ins || !(ins->shared > shared_distance(s.sav, s.sav.route, router_))) return std::nullopt;
    return ins;
  }

  void apply_insertion(SavRuntime& s, PendingRequest& p, Insertion ins, double now) {
    const StopId old_target = s.sav.route.front().stop;
    p.advance(RequestState::assigned);
    --unassigned_;
    s.sav.route = std::move(ins.route);
    log(s, now, LogKind::assign, p.request.id, p.request.origin);
    if (s.moving && s.sav.route.front().stop != old_target) {
      close_segment(s, now, false);
      begin_segment(s, now);
    }
  }

  void on_request(std::size_t index, double now) {
    const TripRequest& r = result_.requests[index];
    arrived_index_.emplace(r.id, arrived_.size());
    arrived_.emplace_back(r);
    ++unassigned_;
    PendingRequest& p = arrived_.back();

    SavRuntime* nearest = nullptr;
    double nearest_distance = std::numeric_limits<double>::infinity();
    for (SavRuntime& s : savs_) {
      if (s.sav.status != SavStatus::idle) continue;
      const double d = router_.from_position(s.sav.position, r.origin);
      if (d < nearest_distance) {
        nearest_distance = d;
        nearest = &s;
      }
    }
    if (nearest) {
      assign_direct(*nearest, p, now);
      return;
    }

    // Whole fleet busy: the vehicle whose route gains the most shared distance
    // takes the request, ties to the smaller added length.
    SavRuntime* best_sav = nullptr;
    std::optional<Insertion> best;
    for (SavRuntime& s : savs_) {
      if (s.sav.route.empty()) continue;
      refresh_position(s, now);
      auto ins = shared_insertion(s, r);
      if (!ins) continue;
      const double added = ins->length - ins->base_length;
      if (!best || ins->shared > best->shared ||
          (ins->shared == best->shared && added < best->length - best->base_length)) {
        best = std::move(ins);
        best_sav = &s;
      }
    }
    if (best) apply_insertion(*best_sav, p, std::move(*best), now);
  }

  // -- background traffic ---------------------------------------------------

  void schedule_injection(std::size_t flow, double now) {
    const double rate = config_.background_flows[flow].rate;
    if (rate <= 0.0) return;
    std::exponential_distribution<double> gap(rate / 3600.0);
    const double t = now + gap(flow_rngs_[flow]);
    if (t < config_.horizon) push(t, EventKind::background_inject, flow, 0);
  }

  void on_inject(std::size_t flow, double now) {
    schedule_injection(flow, now);
    const BackgroundFlow& f = config_.background_flows[flow];
    BackgroundVehicle v;
    v.route = router_.vertex_route(graph_.vertex_index(f.origin), graph_.vertex_index(f.destination));
    if (v.route.empty()) return;
    v.start_time = now;
    ++diag_.background_injected;
    std::size_t slot;
    if (!free_slots_.empty()) {
      slot = free_slots_.back();
      free_slots_.pop_back();
      background_[slot] = std::move(v);
    } else {
      slot = background_.size();
      background_.push_back(std::move(v));
    }
    enter_background_edge(slot, now, true);
  }

  void enter_background_edge(std::size_t slot, double now, bool first) {
    BackgroundVehicle& v = background_[slot];
    const std::size_t e = v.route[v.leg];
    const double speed = effective_speed(edge_at(e), occupancy_[e], background_profile_);
    if (!first && count_stop_event(v.last_speed, speed)) ++v.stops;
    v.last_speed = speed;
    ++occupancy_[e];
    push(now + edge_at(e).length / speed, EventKind::background_edge_exit, slot, 0);
  }

  void on_background_exit(std::size_t slot, double now) {
    BackgroundVehicle& v = background_[slot];
    const DirectedEdge& e = edge_at(v.route[v.leg]);
    --occupancy_[v.route[v.leg]];
    acc_.add_background_distance(e.length);
    v.free_flow_time += e.length / e.free_flow_speed;
    if (++v.leg < v.route.size()) {
      enter_background_edge(slot, now, false);
      return;
    }
    ++diag_.background_exited;
    acc_.add_vehicle(now - v.start_time, v.free_flow_time, v.stops);
    free_slots_.push_back(slot);
  }

  // -- invariants -----------------------------------------------------------

  void check_state() {
    ++diag_.state_checks;
    std::int64_t onboard = 0;
    std::int64_t awaiting_pickup = 0;
    for (const SavRuntime& s : savs_) {
      if (s.sav.onboard_total() > s.sav.capacity) ++diag_.capacity_violations;
      onboard += static_cast<std::int64_t>(s.sav.onboard.size());
      for (const RouteLeg& leg : s.sav.route) {
        if (leg.action == LegAction::pickup) ++awaiting_pickup;
      }
      if (!route_feasible(s.sav, s.sav.route)) ++diag_.route_violations;
      for (const OnboardParty& p : s.sav.onboard) {
        const auto drops = std::count_if(s.sav.route.begin(), s.sav.route.end(), [&](const RouteLeg& l) {
          return l.request == p.request && l.action == LegAction::dropoff;
        });
        if (drops != 1) ++diag_.route_violations;
      }
    }
    const std::int64_t accounted = unassigned_ + awaiting_pickup + onboard + acc_.trips_completed();
    if (accounted != static_cast<std::int64_t>(arrived_.size())) ++diag_.conservation_violations;
  }

  ReplicationResult finish() {
    for (const SavRuntime& s : savs_) acc_.add_vehicle(s.moving_time, s.free_flow_time, s.stops);
    for (const PendingRequest& p : arrived_) {
      switch (p.state) {
        case RequestState::unassigned:
          ++diag_.requests_unassigned;
          break;
        case RequestState::assigned:
          ++diag_.requests_assigned;
          break;
        case RequestState::onboard:
          ++diag_.requests_onboard;
          break;
        case RequestState::completed:
          ++diag_.requests_completed;
          break;
      }
    }
    diag_.requests_generated = static_cast<std::int64_t>(arrived_.size());
    diag_.background_in_network = diag_.background_injected - diag_.background_exited;

    result_.record = acc_.finalize(config_.fleet_size, diag_.requests_generated);
    result_.record.scenario = config_.label;
    result_.record.profile = config_.profile;
    result_.record.replication = index_;
    result_.diagnostics = diag_;
    return std::move(result_);
  }

  const ScenarioConfig& config_;
  const RoadGraph& graph_;
  const Router& router_;
  RunOptions options_;
  int index_;
  std::uint64_t seed_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t next_sequence_ = 0;
  double next_sample_ = 0.0;

  std::vector<int> occupancy_;
  std::vector<SavRuntime> savs_;
  std::vector<PendingRequest> arrived_;
  std::unordered_map<RequestId, std::size_t> arrived_index_;
  std::unordered_map<RequestId, std::size_t> request_index_;
  std::int64_t unassigned_ = 0;

  BehaviorProfile background_profile_;
  std::vector<std::mt19937_64> flow_rngs_;
  std::vector<BackgroundVehicle> background_;
  std::vector<std::size_t> free_slots_;

  MetricsAccumulator acc_;
  RunDiagnostics diag_;
  ReplicationResult result_;
};

}  // namespace

ReplicationResult run_replication(const PreparedScenario& scenario, int index,
                                  const RunOptions& options) {
  if (!scenario.network) fail(ErrorCode::config, "scenario has no network");
  Replication replication(scenario, index, options);
  return replication.run();
}

std::vector<MetricsRecord> ScenarioResult::records() const {
  std::vector<MetricsRecord> out;
  for (const auto& r : replications) out.push_back(r.record);
  return out;
}

ScenarioResult run_scenario(const PreparedScenario& scenario, const RunOptions& options) {
  const int n = scenario.config.replications;
  ScenarioResult result;
  result.replications.resize(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        result.replications[static_cast<std::size_t>(i)] = run_replication(scenario, i, options);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(options.jobs, 1, static_cast<unsigned>(n));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (int i = 0; i < n; ++i) {
    if (!errors[static_cast<std::size_t>(i)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    } catch (const Error& e) {
      fail(e.code(), "replication " + std::to_string(i) + ": " + e.what());
    } catch (const std::exception& e) {
      fail(ErrorCode::internal, "replication " + std::to_string(i) + ": " + e.what());
    }
  }

  const auto records = result.records();
  result.aggregate = aggregate(records);
  for (const auto& r : result.replications) result.diagnostics.merge(r.diagnostics);
  return result;
}

const SweepCell& SweepResult::cell(int fleet_size, const std::string& profile) const {
  for (const SweepCell& c : cells) {
    if (c.fleet_size == fleet_size && c.profile == profile) return c;
  }
  fail(ErrorCode::not_found, "no sweep cell for fleet " + std::to_string(fleet_size) + " / " + profile);
}

std::vector<MetricsRecord> SweepResult::records() const {
  std::vector<MetricsRecord> out;
  for (const SweepCell& c : cells) {
    for (const auto& r : c.result.replications) out.push_back(r.record);
  }
  return out;
}

std::vector<AggregateRecord> SweepResult::aggregates() const {
  std::vector<AggregateRecord> out;
  for (const SweepCell& c : cells) out.push_back(c.result.aggregate);
  return out;
}

SweepResult run_sweep(const PreparedScenario& base, const std::vector<int>& fleet_sizes,
                      const std::vector<std::string>& profiles, const RunOptions& options) {
  if (fleet_sizes.empty() || profiles.empty()) {
    fail(ErrorCode::config, "a sweep needs at least one fleet size and one profile");
  }
  for (int f : fleet_sizes) {
    if (f < 0) fail(ErrorCode::config, "fleet sizes must be non-negative");
  }
  for (const std::string& p : profiles) base.config.behavior(p);

  SweepResult sweep;
  for (int fleet : fleet_sizes) {
    for (const std::string& profile : profiles) {
      PreparedScenario cell = base;
      cell.config.fleet_size = fleet;
      cell.config.profile = profile;
      if (fleet > 0 && cell.network->graph().stops().empty()) {
        fail(ErrorCode::config, "a fleet needs at least one stop to start from");
      }
      sweep.cells.push_back(SweepCell{fleet, profile, run_scenario(cell, options)});
    }
  }
  return sweep;
}

}  // namespace savsim
