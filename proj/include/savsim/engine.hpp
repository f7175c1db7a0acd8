#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "savsim/demand.hpp"
#include "savsim/dispatch.hpp"
#include "savsim/metrics.hpp"
#include "savsim/netgraph.hpp"
#include "savsim/traffic.hpp"

namespace savsim {

// Everything a run needs, mirroring the scenario file. Times in seconds,
// distances in meters.
struct ScenarioConfig {
  std::string label = "scenario";
  std::filesystem::path network;  // relative paths resolve against base_dir
  std::optional<std::filesystem::path> requests_file;
  std::filesystem::path base_dir;

  DemandProfile demand;
  std::vector<BackgroundFlow> background_flows;
  int fleet_size = 8;
  std::string profile = "normal";
  std::vector<BehaviorProfile> profiles = default_profiles();
  DispatchPolicy policy;
  double horizon = 4 * 3600.0;
  int replications = 20;
  std::uint64_t base_seed = 1;
  double occupancy_sample_interval = 0.0;  // 0 disables sampling

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  const BehaviorProfile& behavior(const std::string& name) const;
};

// Immutable graph plus routing tables, shared read-only by replications.
class NetworkModel {
 public:
  explicit NetworkModel(RoadGraph graph);
  NetworkModel(const NetworkModel&) = delete;
  NetworkModel& operator=(const NetworkModel&) = delete;

  const RoadGraph& graph() const { return graph_; }
  const Router& router() const { return *router_; }

 private:
  RoadGraph graph_;
  std::unique_ptr<Router> router_;
};

// Validates and loads the network (unless supplied); throws config errors
// describing the first problem found.
struct PreparedScenario {
  ScenarioConfig config;
  std::shared_ptr<const NetworkModel> network;
  std::optional<std::vector<TripRequest>> fixed_requests;
};

PreparedScenario prepare_scenario(ScenarioConfig config,
                                  std::shared_ptr<const NetworkModel> network = nullptr);

struct RunOptions {
  unsigned jobs = 1;
  bool identical_seeds = false;  // every replication uses base_seed
  bool capture_event_log = false;
};

struct RunDiagnostics {
  std::uint64_t events_processed = 0;
  std::uint64_t state_checks = 0;
  std::uint64_t capacity_violations = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t route_violations = 0;
  std::uint64_t time_order_violations = 0;
  std::uint64_t background_injected = 0;
  std::uint64_t background_exited = 0;
  std::uint64_t background_in_network = 0;
  std::int64_t requests_generated = 0;
  std::int64_t requests_unassigned = 0;
  std::int64_t requests_assigned = 0;
  std::int64_t requests_onboard = 0;
  std::int64_t requests_completed = 0;
  std::uint64_t event_trace_hash = 0;

  void merge(const RunDiagnostics& other);
  bool clean() const {
    return capacity_violations == 0 && conservation_violations == 0 && route_violations == 0 &&
           time_order_violations == 0;
  }
};

struct ReplicationResult {
  MetricsRecord record;
  RunDiagnostics diagnostics;
  std::vector<TripRequest> requests;
  std::vector<EventLogEntry> event_log;
  std::vector<OccupancySample> occupancy;
};

std::uint64_t replication_seed(const ScenarioConfig& config, int index, const RunOptions& options);

ReplicationResult run_replication(const PreparedScenario& scenario, int index,
                                  const RunOptions& options = {});

struct ScenarioResult {
  std::vector<ReplicationResult> replications;  // by index
  AggregateRecord aggregate;
  RunDiagnostics diagnostics;

  std::vector<MetricsRecord> records() const;
};

// Runs every replication (concurrently when options.jobs > 1) and aggregates.
ScenarioResult run_scenario(const PreparedScenario& scenario, const RunOptions& options = {});

struct SweepCell {
  int fleet_size = 0;
  std::string profile;
  ScenarioResult result;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // fleet sizes outer, profiles inner, in input order

  const SweepCell& cell(int fleet_size, const std::string& profile) const;
  std::vector<MetricsRecord> records() const;
  std::vector<AggregateRecord> aggregates() const;
};

SweepResult run_sweep(const PreparedScenario& base, const std::vector<int>& fleet_sizes,
                      const std::vector<std::string>& profiles, const RunOptions& options = {});

}  // namespace savsim
