#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "savsim/ids.hpp"

namespace savsim {

// Delay against the free-flow baseline, never negative.
double vehicle_delay(double actual_travel_time, double free_flow_time);

struct MetricsRecord {
  std::string scenario;
  int fleet_size = 0;
  std::string profile;
  int replication = 0;

  double avg_delay_per_vehicle = 0.0;  // minutes
  double avg_stops_per_vehicle = 0.0;
  double total_distance = 0.0;  // meters, all vehicles
  double sav_distance = 0.0;    // meters, fleet only
  std::int64_t trips_completed = 0;
  double trips_per_sav = 0.0;
  double avg_wait_time = 0.0;  // minutes, picked-up requests only
  std::int64_t passengers_served = 0;
  double shared_miles = 0.0;  // meters driven with >= 2 requests onboard
  std::int64_t unserved_requests = 0;

  bool empty_vehicle_population = false;
  bool empty_wait_population = false;

  bool operator==(const MetricsRecord&) const = default;
};

// Per-replication accumulator owned by the simulation; finalize() turns it
// into a record.
class MetricsAccumulator {
 public:
  void add_vehicle(double actual_travel_time, double free_flow_time, int stops);
  void add_background_distance(double meters) { background_distance_ += meters; }
  void add_sav_distance(double meters) { sav_distance_ += meters; }
  void add_shared_distance(double meters) { shared_ += meters; }
  void add_wait(double seconds);
  void add_completed_trip(int party_size);

  std::int64_t passengers_served() const { return passengers_; }
  std::int64_t trips_completed() const { return trips_; }
  double shared_distance() const { return shared_; }

  MetricsRecord finalize(int fleet_size, std::int64_t requests_generated) const;

 private:
  std::int64_t vehicles_ = 0;
  double delay_sum_ = 0.0;
  double stops_sum_ = 0.0;
  double background_distance_ = 0.0;
  double sav_distance_ = 0.0;
  double shared_ = 0.0;
  std::int64_t waits_ = 0;
  double wait_sum_ = 0.0;
  std::int64_t trips_ = 0;
  std::int64_t passengers_ = 0;
};

inline constexpr std::string_view kRecordCsvHeader =
    "scenario,fleet_size,profile,replication,avg_delay_min,avg_stops,total_distance_m,"
    "trips_completed,trips_per_sav,avg_wait_min,passengers_served,shared_miles_m,unserved";

// Rows sorted by (scenario, fleet_size, profile, replication), six decimals.
void emit_csv(std::span<const MetricsRecord> records, std::ostream& out);
void emit_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample deviation; 0 for a single value
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> values);

// Names of the numeric fields aggregated per scenario, in output order.
std::span<const std::string_view> metric_names();
double metric_value(const MetricsRecord& record, std::string_view name);

struct AggregateRecord {
  std::string scenario;
  int fleet_size = 0;
  std::string profile;
  int replications = 0;
  std::map<std::string, Summary, std::less<>> metrics;

  const Summary& at(std::string_view name) const;
};

// Sorts by replication index before reducing, so the result does not depend
// on completion order.
AggregateRecord aggregate(std::span<const MetricsRecord> records);

inline constexpr std::string_view kAggregateCsvHeader =
    "scenario,fleet_size,profile,replications,metric,mean,stddev,min,max";

void emit_aggregate_csv(std::span<const AggregateRecord> aggregates, std::ostream& out);
void emit_aggregate_csv(std::span<const AggregateRecord> aggregates,
                        const std::filesystem::path& path);

// One line per vehicle state transition.
enum class LogKind { assign, depart, pickup, dropoff, idle };

std::string_view to_string(LogKind kind);

struct EventLogEntry {
  double time = 0.0;
  SavId sav;
  LogKind kind = LogKind::assign;
  RequestId request;
  StopId stop;
  double odometer = 0.0;  // cumulative meters driven by this vehicle
};

inline constexpr std::string_view kEventLogHeader = "time_s,sav,event,request,stop,odometer_m";

void emit_event_log(std::span<const EventLogEntry> log, std::ostream& out);

// Recomputes shared distance from pickup/dropoff entries alone: odometer
// deltas between consecutive boarding changes of a vehicle count when two or
// more requests were onboard.
double replay_shared_distance(std::span<const EventLogEntry> log);

struct OccupancySample {
  double time = 0.0;
  EdgeId edge;
  int occupancy = 0;
};

inline constexpr std::string_view kOccupancyHeader = "time_s,edge_id,occupancy";

void emit_occupancy_csv(std::span<const OccupancySample> samples, std::ostream& out);

}  // namespace savsim
