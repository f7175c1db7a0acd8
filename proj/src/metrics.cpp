#include "savsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "savsim/error.hpp"
#include "savsim/fileio.hpp"

namespace savsim {

double vehicle_delay(double actual_travel_time, double free_flow_time) {
  return std::max(0.0, actual_travel_time - free_flow_time);
}

void MetricsAccumulator::add_vehicle(double actual_travel_time, double free_flow_time, int stops) {
  ++vehicles_;
  delay_sum_ += vehicle_delay(actual_travel_time, free_flow_time);
  stops_sum_ += stops;
}

void MetricsAccumulator::add_wait(double seconds) {
  ++waits_;
  wait_sum_ += seconds;
}

void MetricsAccumulator::add_completed_trip(int party_size) {
  ++trips_;
  passengers_ += party_size;
}

MetricsRecord MetricsAccumulator::finalize(int fleet_size, std::int64_t requests_generated) const {
  MetricsRecord r;
  r.fleet_size = fleet_size;
  r.empty_vehicle_population = vehicles_ == 0;
  r.empty_wait_population = waits_ == 0;
  if (vehicles_ > 0) {
    r.avg_delay_per_vehicle = delay_sum_ / static_cast<double>(vehicles_) / 60.0;
    r.avg_stops_per_vehicle = stops_sum_ / static_cast<double>(vehicles_);
  }
  r.sav_distance = sav_distance_;
  r.total_distance = background_distance_ + sav_distance_;
  r.trips_completed = trips_;
  r.trips_per_sav = fleet_size > 0 ? static_cast<double>(trips_) / fleet_size : 0.0;
  if (waits_ > 0) r.avg_wait_time = wait_sum_ / static_cast<double>(waits_) / 60.0;
  r.passengers_served = passengers_;
  r.shared_miles = shared_;
  r.unserved_requests = requests_generated - trips_;
  return r;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

bool record_order(const MetricsRecord& a, const MetricsRecord& b) {
  if (a.scenario != b.scenario) return a.scenario < b.scenario;
  if (a.fleet_size != b.fleet_size) return a.fleet_size < b.fleet_size;
  if (a.profile != b.profile) return a.profile < b.profile;
  return a.replication < b.replication;
}

}  // namespace

void emit_csv(std::span<const MetricsRecord> records, std::ostream& out) {
  std::vector<const MetricsRecord*> rows;
  for (const auto& r : records) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const MetricsRecord* a, const MetricsRecord* b) { return record_order(*a, *b); });
  out << kRecordCsvHeader << '\n';
  for (const MetricsRecord* r : rows) {
    out << r->scenario << ',' << r->fleet_size << ',' << r->profile << ',' << r->replication << ','
        << fixed6(r->avg_delay_per_vehicle) << ',' << fixed6(r->avg_stops_per_vehicle) << ','
        << fixed6(r->total_distance) << ',' << r->trips_completed << ','
        << fixed6(r->trips_per_sav) << ',' << fixed6(r->avg_wait_time) << ','
        << r->passengers_served << ',' << fixed6(r->shared_miles) << ',' << r->unserved_requests
        << '\n';
  }
}

void emit_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { emit_csv(records, out); });
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  const double n = static_cast<double>(values.size());
  s.mean = sum / n;
  // Rounding in the sum would otherwise leave a tiny spread for equal values.
  if (s.min == s.max) {
    s.mean = s.min;
    return s;
  }
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

std::span<const std::string_view> metric_names() {
  static constexpr std::array<std::string_view, 10> names{
      "avg_delay_min",   "avg_stops",    "total_distance_m",  "sav_distance_m",
      "trips_completed", "trips_per_sav", "avg_wait_min",     "passengers_served",
      "shared_miles_m",  "unserved"};
  return names;
}

double metric_value(const MetricsRecord& r, std::string_view name) {
  if (name == "avg_delay_min") return r.avg_delay_per_vehicle;
  if (name == "avg_stops") return r.avg_stops_per_vehicle;
  if (name == "total_distance_m") return r.total_distance;
  if (name == "sav_distance_m") return r.sav_distance;
  if (name == "trips_completed") return static_cast<double>(r.trips_completed);
  if (name == "trips_per_sav") return r.trips_per_sav;
  if (name == "avg_wait_min") return r.avg_wait_time;
  if (name == "passengers_served") return static_cast<double>(r.passengers_served);
  if (name == "shared_miles_m") return r.shared_miles;
  if (name == "unserved") return static_cast<double>(r.unserved_requests);
  fail(ErrorCode::invalid_input, "unknown metric '" + std::string(name) + "'");
}

const Summary& AggregateRecord::at(std::string_view name) const {
  auto it = metrics.find(name);
  if (it == metrics.end()) fail(ErrorCode::not_found, "no aggregate for '" + std::string(name) + "'");
  return it->second;
}

AggregateRecord aggregate(std::span<const MetricsRecord> records) {
  std::vector<const MetricsRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const MetricsRecord* a, const MetricsRecord* b) {
    return a->replication < b->replication;
  });
  AggregateRecord agg;
  agg.replications = static_cast<int>(sorted.size());
  if (!sorted.empty()) {
    agg.scenario = sorted.front()->scenario;
    agg.fleet_size = sorted.front()->fleet_size;
    agg.profile = sorted.front()->profile;
  }
  std::vector<double> values;
  for (std::string_view name : metric_names()) {
    values.clear();
    for (const MetricsRecord* r : sorted) values.push_back(metric_value(*r, name));
    agg.metrics.emplace(std::string(name), summarize(values));
  }
  return agg;
}

void emit_aggregate_csv(std::span<const AggregateRecord> aggregates, std::ostream& out) {
  std::vector<const AggregateRecord*> rows;
  for (const auto& a : aggregates) rows.push_back(&a);
  std::stable_sort(rows.begin(), rows.end(), [](const AggregateRecord* a, const AggregateRecord* b) {
    if (a->scenario != b->scenario) return a->scenario < b->scenario;
    if (a->fleet_size != b->fleet_size) return a->fleet_size < b->fleet_size;
    return a->profile < b->profile;
  });
  out << kAggregateCsvHeader << '\n';
  for (const AggregateRecord* a : rows) {
    for (std::string_view name : metric_names()) {
      const Summary& s = a->at(name);
      out << a->scenario << ',' << a->fleet_size << ',' << a->profile << ',' << a->replications
          << ',' << name << ',' << fixed6(s.mean) << ',' << fixed6(s.stddev) << ','
          << fixed6(s.min) << ',' << fixed6(s.max) << '\n';
    }
  }
}

void emit_aggregate_csv(std::span<const AggregateRecord> aggregates,
                        const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { emit_aggregate_csv(aggregates, out); });
}

std::string_view to_string(LogKind kind) {
  switch (kind) {
    case LogKind::assign:
      return "assign";
    case LogKind::depart:
      return "depart";
    case LogKind::pickup:
      return "pickup";
    case LogKind::dropoff:
      return "dropoff";
    case LogKind::idle:
      return "idle";
  }
  return "unknown";
}

void emit_event_log(std::span<const EventLogEntry> log, std::ostream& out) {
  out << kEventLogHeader << '\n';
  for (const EventLogEntry& e : log) {
    out << fixed6(e.time) << ',' << e.sav.value << ',' << to_string(e.kind) << ','
        << e.request.value << ',' << e.stop.value << ',' << fixed6(e.odometer) << '\n';
  }
}

double replay_shared_distance(std::span<const EventLogEntry> log) {
  struct Track {
    int riding = 0;
    double mark = 0.0;
  };
  std::unordered_map<SavId, Track> tracks;
  double shared = 0.0;
  for (const EventLogEntry& e : log) {
    if (e.kind != LogKind::pickup && e.kind != LogKind::dropoff) continue;
    Track& t = tracks[e.sav];
    if (t.riding >= 2) shared += e.odometer - t.mark;
    t.mark = e.odometer;
    t.riding += e.kind == LogKind::pickup ? 1 : -1;
  }
  return shared;
}

void emit_occupancy_csv(std::span<const OccupancySample> samples, std::ostream& out) {
  out << kOccupancyHeader << '\n';
  for (const OccupancySample& s : samples) {
    out << fixed6(s.time) << ',' << s.edge.value << ',' << s.occupancy << '\n';
  }
}

}  // namespace savsim
