#include "savsim/savsim.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "savsim/engine.hpp"
#include "savsim/error.hpp"
#include "savsim/fileio.hpp"
#include "savsim/metrics.hpp"
#include "savsim/network_io.hpp"
#include "savsim/routing_oracle.hpp"
#include "savsim/scenario_gen.hpp"
#include "savsim/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace savsim;

struct savsim_network {
  std::shared_ptr<const NetworkModel> model;
  std::vector<StopId> stop_ids;
};

struct savsim_scenario {
  nlohmann::json doc;
  fs::path base_dir;
  std::optional<PreparedScenario> prepared;  // dropped whenever doc changes
};

namespace {

thread_local std::string last_error;

savsim_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input:
      return SAVSIM_ERR_INVALID_INPUT;
    case ErrorCode::not_found:
      return SAVSIM_ERR_NOT_FOUND;
    case ErrorCode::config:
      return SAVSIM_ERR_CONFIG;
    case ErrorCode::io:
      return SAVSIM_ERR_IO;
    case ErrorCode::internal:
      return SAVSIM_ERR_INTERNAL;
  }
  return SAVSIM_ERR_INTERNAL;
}

template <class F>
savsim_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return SAVSIM_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return SAVSIM_ERR_CONFIG;
  } catch (const fs::filesystem_error& e) {
    last_error = e.what();
    return SAVSIM_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SAVSIM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SAVSIM_ERR_INTERNAL;
  }
}

savsim_status null_argument(const char* name) {
  last_error = std::string(name) + " must not be NULL";
  return SAVSIM_ERR_NULL_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const PreparedScenario& prepared(savsim_scenario& s) {
  if (!s.prepared) s.prepared = prepare_scenario(scenario_from_json(s.doc, s.base_dir));
  return *s.prepared;
}

RunOptions run_options(const savsim_run_options* options) {
  RunOptions o;
  if (options) {
    o.jobs = options->jobs == 0 ? 1 : options->jobs;
    o.capture_event_log = options->event_logs != 0;
  }
  return o;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    fail(ErrorCode::io, dir.string() + ": cannot create output directory");
  }
}

}  // namespace

extern "C" {

const char* savsim_version(void) { return SAVSIM_VERSION; }

const char* savsim_last_error(void) { return last_error.c_str(); }

void savsim_string_free(char* s) { std::free(s); }

savsim_status savsim_validate_file(const char* path, char** report, size_t* violations) {
  if (!path) return null_argument("path");
  return guarded([&] {
    const ValidationReport r = validate_graph(read_network_file(path));
    if (violations) *violations = r.violations.size();
    if (report) *report = copy_string(r.to_string());
  });
}

savsim_status savsim_network_load(const char* path, savsim_network** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<savsim_network>();
    handle->model = std::make_shared<const NetworkModel>(load_network(path));
    for (const Stop& s : handle->model->graph().stops()) handle->stop_ids.push_back(s.id);
    std::sort(handle->stop_ids.begin(), handle->stop_ids.end());
    *out = handle.release();
  });
}

void savsim_network_free(savsim_network* network) { delete network; }

size_t savsim_network_stop_count(const savsim_network* network) {
  return network ? network->stop_ids.size() : 0;
}

savsim_status savsim_network_stop_id(const savsim_network* network, size_t index, int64_t* id) {
  if (!network) return null_argument("network");
  if (!id) return null_argument("id");
  return guarded([&] {
    if (index >= network->stop_ids.size()) {
      fail(ErrorCode::not_found, "stop index " + std::to_string(index) + " out of range");
    }
    *id = network->stop_ids[index].value;
  });
}

savsim_status savsim_network_stop_distance(const savsim_network* network, int64_t from_stop,
                                           int64_t to_stop, double* meters) {
  if (!network) return null_argument("network");
  if (!meters) return null_argument("meters");
  return guarded([&] {
    const RoadGraph& g = network->model->graph();
    for (int64_t id : {from_stop, to_stop}) {
      if (!g.has_stop(StopId{id})) fail(ErrorCode::not_found, "unknown stop " + std::to_string(id));
    }
    *meters = network->model->router().between(StopId{from_stop}, StopId{to_stop});
  });
}

size_t savsim_network_table_size(const savsim_network* network) {
  return network ? network->model->router().table().size() : 0;
}

savsim_status savsim_network_oracle_check(const savsim_network* network, double tolerance,
                                          char** report, size_t* mismatches) {
  if (!network) return null_argument("network");
  return guarded([&] {
    const OracleReport r =
        check_stop_table(network->model->graph(), network->model->router().table(), tolerance);
    if (mismatches) *mismatches = r.mismatches.size();
    if (report) *report = copy_string(r.to_string());
  });
}

void savsim_synthetic_spec_default(savsim_synthetic_spec* spec) {
  if (!spec) return;
  const SyntheticSpec d;
  *spec = savsim_synthetic_spec{d.width,
                                d.height,
                                d.grid_spacing,
                                d.peripheral_stop_count,
                                d.central_stop_count,
                                d.seed};
}

savsim_status savsim_generate(const savsim_synthetic_spec* spec, const char* out_dir) {
  if (!spec) return null_argument("spec");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    SyntheticSpec s;
    s.width = spec->width;
    s.height = spec->height;
    s.grid_spacing = spec->grid_spacing;
    s.peripheral_stop_count = spec->peripheral_stop_count;
    s.central_stop_count = spec->central_stop_count;
    s.seed = spec->seed;
    const SyntheticNetwork net = generate_network(s);
    ensure_directory(out_dir);
    save_network(net.graph, fs::path(out_dir) / "network.json");
    save_scenario(default_scenario(net, "network.json"), fs::path(out_dir) / "scenario.json");
  });
}

savsim_status savsim_scenario_load(const char* path, const char* const* overrides,
                                   size_t override_count, savsim_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  if (override_count > 0 && !overrides) return null_argument("overrides");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<savsim_scenario>();
    handle->doc = load_scenario_document(path);
    handle->base_dir = fs::path(path).parent_path();
    for (size_t i = 0; i < override_count; ++i) {
      const auto [key, value] = parse_override(overrides[i]);
      apply_override(handle->doc, key, value);
    }
    // Surface type errors now rather than at run time.
    scenario_from_json(handle->doc, handle->base_dir);
    *out = handle.release();
  });
}

savsim_status savsim_scenario_set(savsim_scenario* scenario, const char* key, const char* value) {
  if (!scenario) return null_argument("scenario");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] {
    nlohmann::json doc = scenario->doc;
    apply_override(doc, key, value);
    scenario_from_json(doc, scenario->base_dir);
    scenario->doc = std::move(doc);
    scenario->prepared.reset();
  });
}

void savsim_scenario_free(savsim_scenario* scenario) { delete scenario; }

savsim_status savsim_run_replication(savsim_scenario* scenario, int index, savsim_metrics* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const ReplicationResult r = run_replication(prepared(*scenario), index);
    const MetricsRecord& m = r.record;
    *out = savsim_metrics{m.replication,
                          m.fleet_size,
                          m.avg_delay_per_vehicle,
                          m.avg_stops_per_vehicle,
                          m.total_distance,
                          m.sav_distance,
                          m.trips_completed,
                          m.trips_per_sav,
                          m.avg_wait_time,
                          m.passengers_served,
                          m.shared_miles,
                          m.unserved_requests,
                          r.diagnostics.capacity_violations,
                          r.diagnostics.conservation_violations};
  });
}

savsim_status savsim_run(savsim_scenario* scenario, const char* out_dir,
                         const savsim_run_options* options) {
  if (!scenario) return null_argument("scenario");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const RunOptions opts = run_options(options);
    const ScenarioResult result = run_scenario(prepared(*scenario), opts);
    const fs::path dir(out_dir);
    ensure_directory(dir);
    emit_csv(result.records(), dir / "records.csv");
    const AggregateRecord aggregates[] = {result.aggregate};
    emit_aggregate_csv(aggregates, dir / "aggregate.csv");
    for (const ReplicationResult& r : result.replications) {
      const std::string k = std::to_string(r.record.replication);
      if (opts.capture_event_log) {
        write_file_atomically(dir / ("events_r" + k + ".csv"),
                              [&](std::ostream& o) { emit_event_log(r.event_log, o); });
      }
      if (scenario->prepared->config.occupancy_sample_interval > 0.0) {
        write_file_atomically(dir / ("occupancy_r" + k + ".csv"),
                              [&](std::ostream& o) { emit_occupancy_csv(r.occupancy, o); });
      }
    }
  });
}

savsim_status savsim_sweep(savsim_scenario* scenario, const int* fleet_sizes, size_t fleet_count,
                           const char* const* profiles, size_t profile_count, const char* out_dir,
                           const savsim_run_options* options) {
  if (!scenario) return null_argument("scenario");
  if (!fleet_sizes && fleet_count > 0) return null_argument("fleet_sizes");
  if (!profiles && profile_count > 0) return null_argument("profiles");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const std::vector<int> fleets(fleet_sizes, fleet_sizes + fleet_count);
    const std::vector<std::string> names(profiles, profiles + profile_count);
    const SweepResult result = run_sweep(prepared(*scenario), fleets, names, run_options(options));
    const fs::path dir(out_dir);
    ensure_directory(dir);
    emit_csv(result.records(), dir / "sweep.csv");
    emit_aggregate_csv(result.aggregates(), dir / "sweep_aggregate.csv");
  });
}

}  // extern "C"
