/* C interface to the savsim shared library.
 *
 * Every function returns a savsim_status. On failure the message for the
 * calling thread is available from savsim_last_error() until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with savsim_string_free(). */
#ifndef SAVSIM_H
#define SAVSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SAVSIM_API __declspec(dllexport)
#else
#define SAVSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum savsim_status {
  SAVSIM_OK = 0,
  SAVSIM_ERR_INVALID_INPUT = 1,
  SAVSIM_ERR_NOT_FOUND = 2,
  SAVSIM_ERR_CONFIG = 3,
  SAVSIM_ERR_IO = 4,
  SAVSIM_ERR_INTERNAL = 5,
  SAVSIM_ERR_NULL_ARGUMENT = 6
} savsim_status;

typedef struct savsim_network savsim_network;
typedef struct savsim_scenario savsim_scenario;

SAVSIM_API const char* savsim_version(void);
SAVSIM_API const char* savsim_last_error(void);
SAVSIM_API void savsim_string_free(char* s);

/* Reads a network file and validates it. `violations` receives the number of
 * problems found (0 means the graph is usable); `report` the printable
 * report. Either out-parameter may be NULL. */
SAVSIM_API savsim_status savsim_validate_file(const char* path, char** report,
                                              size_t* violations);

/* Loads a network that must validate cleanly, and builds its routing tables. */
SAVSIM_API savsim_status savsim_network_load(const char* path, savsim_network** out);
SAVSIM_API void savsim_network_free(savsim_network* network);

SAVSIM_API size_t savsim_network_stop_count(const savsim_network* network);
/* Stop ids in ascending order, index in [0, stop_count). */
SAVSIM_API savsim_status savsim_network_stop_id(const savsim_network* network, size_t index,
                                                int64_t* id);
SAVSIM_API savsim_status savsim_network_stop_distance(const savsim_network* network,
                                                      int64_t from_stop, int64_t to_stop,
                                                      double* meters);
/* Number of ordered stop pairs held by the distance table. */
SAVSIM_API size_t savsim_network_table_size(const savsim_network* network);

/* Compares every table entry with the split-graph reference. `mismatches`
 * receives the number of pairs off by more than `tolerance` meters. */
SAVSIM_API savsim_status savsim_network_oracle_check(const savsim_network* network,
                                                     double tolerance, char** report,
                                                     size_t* mismatches);

typedef struct savsim_synthetic_spec {
  double width;
  double height;
  double grid_spacing;
  int peripheral_stop_count;
  int central_stop_count;
  uint64_t seed;
} savsim_synthetic_spec;

SAVSIM_API void savsim_synthetic_spec_default(savsim_synthetic_spec* spec);

/* Writes <out_dir>/network.json and <out_dir>/scenario.json. */
SAVSIM_API savsim_status savsim_generate(const savsim_synthetic_spec* spec, const char* out_dir);

/* Loads a scenario and applies "dotted.key=value" overrides in order. */
SAVSIM_API savsim_status savsim_scenario_load(const char* path, const char* const* overrides,
                                              size_t override_count, savsim_scenario** out);
SAVSIM_API savsim_status savsim_scenario_set(savsim_scenario* scenario, const char* key,
                                             const char* value);
SAVSIM_API void savsim_scenario_free(savsim_scenario* scenario);

typedef struct savsim_metrics {
  int replication;
  int fleet_size;
  double avg_delay_min;
  double avg_stops;
  double total_distance_m;
  double sav_distance_m;
  int64_t trips_completed;
  double trips_per_sav;
  double avg_wait_min;
  int64_t passengers_served;
  double shared_miles_m;
  int64_t unserved;
  uint64_t capacity_violations;
  uint64_t conservation_violations;
} savsim_metrics;

SAVSIM_API savsim_status savsim_run_replication(savsim_scenario* scenario, int index,
                                                savsim_metrics* out);

typedef struct savsim_run_options {
  unsigned jobs;     /* worker threads; 0 or 1 runs sequentially */
  int event_logs;    /* nonzero writes one event log per replication */
} savsim_run_options;

/* Writes records.csv and aggregate.csv (plus events_r<k>.csv and
 * occupancy_r<k>.csv when requested) into out_dir. */
SAVSIM_API savsim_status savsim_run(savsim_scenario* scenario, const char* out_dir,
                                    const savsim_run_options* options);

/* Writes sweep.csv (one row per cell and replication) and
 * sweep_aggregate.csv into out_dir. */
SAVSIM_API savsim_status savsim_sweep(savsim_scenario* scenario, const int* fleet_sizes,
                                      size_t fleet_count, const char* const* profiles,
                                      size_t profile_count, const char* out_dir,
                                      const savsim_run_options* options);

#ifdef __cplusplus
}
#endif

#endif
