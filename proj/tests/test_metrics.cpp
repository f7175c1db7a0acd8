#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "savsim/error.hpp"
#include "savsim/metrics.hpp"

using namespace savsim;

namespace {

std::string csv(std::span<const MetricsRecord> records) {
  std::ostringstream out;
  emit_csv(records, out);
  return out.str();
}

int line_count(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("vehicle_delay") {
  CHECK(vehicle_delay(100, 100) == 0.0);
  CHECK(vehicle_delay(150, 100) == 50.0);
  CHECK(vehicle_delay(90, 100) == 0.0);
}

TEST_CASE("finalize") {
  MetricsAccumulator empty;
  const MetricsRecord e = empty.finalize(0, 0);
  CHECK(e.empty_vehicle_population);
  CHECK(e.empty_wait_population);
  CHECK(e.avg_delay_per_vehicle == 0.0);
  CHECK(e.avg_stops_per_vehicle == 0.0);
  CHECK(e.trips_per_sav == 0.0);

  MetricsAccumulator acc;
  acc.add_wait(600.0);
  acc.add_wait(1200.0);
  acc.add_vehicle(160.0, 100.0, 2);
  acc.add_vehicle(90.0, 100.0, 0);
  acc.add_completed_trip(2);
  acc.add_completed_trip(1);
  acc.add_sav_distance(500.0);
  acc.add_background_distance(1500.0);
  const MetricsRecord r = acc.finalize(2, 5);
  CHECK(r.avg_wait_time == 15.0);
  CHECK(r.avg_delay_per_vehicle == doctest::Approx(0.5));
  CHECK(r.avg_stops_per_vehicle == 1.0);
  CHECK(r.trips_completed == 2);
  CHECK(r.trips_per_sav == 1.0);
  CHECK(r.passengers_served == 3);
  CHECK(r.total_distance == 2000.0);
  CHECK(r.sav_distance == 500.0);
  CHECK(r.unserved_requests == 3);
  CHECK_FALSE(r.empty_vehicle_population);
}

TEST_CASE("shared distance replay") {
  // A boards at 0 m, B at 400 m, B leaves at 1400 m, A leaves at 2000 m.
  const SavId v{0};
  const std::vector<EventLogEntry> log{
      {0.0, v, LogKind::pickup, RequestId{1}, StopId{1}, 0.0},
      {10.0, v, LogKind::depart, RequestId{1}, StopId{2}, 0.0},
      {40.0, v, LogKind::pickup, RequestId{2}, StopId{2}, 400.0},
      {80.0, v, LogKind::dropoff, RequestId{2}, StopId{3}, 1400.0},
      {99.0, v, LogKind::dropoff, RequestId{1}, StopId{4}, 2000.0},
      // A second vehicle alone the whole time.
      {5.0, SavId{1}, LogKind::pickup, RequestId{3}, StopId{1}, 0.0},
      {50.0, SavId{1}, LogKind::dropoff, RequestId{3}, StopId{4}, 900.0},
  };
  CHECK(replay_shared_distance(log) == 1000.0);
}

TEST_CASE("record CSV") {
  CHECK(csv({}) == std::string(kRecordCsvHeader) + "\n");

  MetricsRecord one;
  one.scenario = "s";
  one.fleet_size = 4;
  one.profile = "normal";
  one.avg_wait_time = 1.0 / 3.0;
  const std::vector<MetricsRecord> single{one};
  const std::string text = csv(single);
  CHECK(line_count(text) == 2);
  CHECK(text.find("s,4,normal,0,0.000000,0.000000,0.000000,0,0.000000,0.333333,0,0.000000,0\n") !=
        std::string::npos);

  MetricsRecord two = one;
  two.replication = 1;
  MetricsRecord three = one;
  three.fleet_size = 2;
  const std::vector<MetricsRecord> shuffled{two, three, one};
  const std::vector<MetricsRecord> ordered{three, one, two};
  CHECK(csv(shuffled) == csv(ordered));
  CHECK(csv(shuffled) == csv(shuffled));
}

TEST_CASE("aggregate") {
  std::vector<MetricsRecord> records(3);
  const double waits[] = {10.0, 20.0, 60.0};
  for (int i = 0; i < 3; ++i) {
    records[static_cast<std::size_t>(i)].scenario = "s";
    records[static_cast<std::size_t>(i)].replication = 2 - i;
    records[static_cast<std::size_t>(i)].avg_wait_time = waits[i];
  }
  const AggregateRecord a = aggregate(records);
  CHECK(a.replications == 3);
  const Summary& w = a.at("avg_wait_min");
  CHECK(w.mean == 30.0);
  CHECK(w.min == 10.0);
  CHECK(w.max == 60.0);
  // Sample deviation of {10, 20, 60}: sqrt((400 + 100 + 900) / 2).
  CHECK(w.stddev == doctest::Approx(std::sqrt(700.0)));
  CHECK(a.at("trips_completed").stddev == 0.0);
  CHECK_THROWS_AS(a.at("nope"), Error);

  const AggregateRecord single = aggregate(std::span(records).subspan(0, 1));
  CHECK(single.at("avg_wait_min").mean == 10.0);
  CHECK(single.at("avg_wait_min").stddev == 0.0);

  std::ostringstream out;
  const std::vector<AggregateRecord> both{a};
  emit_aggregate_csv(both, out);
  CHECK(line_count(out.str()) == 1 + static_cast<int>(metric_names().size()));
}
