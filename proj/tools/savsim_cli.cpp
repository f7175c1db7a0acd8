// savsim command-line driver. Exit status: 0 success, 1 validation or oracle
// failure, 2 usage error, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "savsim/savsim.h"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

int report_error(savsim_status status) {
  std::fprintf(stderr, "savsim: %s\n", savsim_last_error());
  switch (status) {
    case SAVSIM_ERR_IO:
      return kIo;
    case SAVSIM_ERR_NULL_ARGUMENT:
      return kUsage;
    default:
      return kFailed;
  }
}

struct Options {
  std::string network;
  std::string scenario;
  std::string out;
  std::vector<std::string> overrides;
  std::vector<int> fleet_sizes{2, 4, 6, 8, 10};
  std::vector<std::string> profiles{"cautious", "normal", "aggressive"};
  unsigned long long seed = 0;
  int replications = 0;
  unsigned jobs = 1;
  bool verbose = false;
};

int cmd_validate(const Options& o) {
  char* report = nullptr;
  size_t violations = 0;
  const savsim_status st = savsim_validate_file(o.network.c_str(), &report, &violations);
  if (st != SAVSIM_OK) return report_error(st);
  if (violations == 0) {
    std::printf("%s: no violations\n", o.network.c_str());
  } else {
    std::fputs(report, stdout);
  }
  savsim_string_free(report);
  return violations == 0 ? kOk : kFailed;
}

int cmd_oracle_check(const Options& o) {
  savsim_network* net = nullptr;
  savsim_status st = savsim_network_load(o.network.c_str(), &net);
  if (st != SAVSIM_OK) return report_error(st);
  char* report = nullptr;
  size_t mismatches = 0;
  st = savsim_network_oracle_check(net, 1e-9, &report, &mismatches);
  savsim_network_free(net);
  if (st != SAVSIM_OK) return report_error(st);
  std::fputs(report, stdout);
  savsim_string_free(report);
  return mismatches == 0 ? kOk : kFailed;
}

int cmd_generate(const Options& o, bool seeded) {
  savsim_synthetic_spec spec;
  savsim_synthetic_spec_default(&spec);
  if (seeded) spec.seed = o.seed;
  const savsim_status st = savsim_generate(&spec, o.out.c_str());
  if (st != SAVSIM_OK) return report_error(st);
  std::printf("wrote %s/network.json and %s/scenario.json\n", o.out.c_str(), o.out.c_str());
  return kOk;
}

// Loads the scenario with --set overrides and the --seed/--replications
// shortcuts applied. Returns nullptr after printing the error.
savsim_scenario* load(const Options& o, bool seeded, int& exit_code) {
  std::vector<const char*> sets;
  for (const std::string& s : o.overrides) sets.push_back(s.c_str());
  savsim_scenario* sc = nullptr;
  savsim_status st = savsim_scenario_load(o.scenario.c_str(), sets.data(), sets.size(), &sc);
  if (st == SAVSIM_OK && seeded) {
    st = savsim_scenario_set(sc, "base_seed", std::to_string(o.seed).c_str());
  }
  if (st == SAVSIM_OK && o.replications > 0) {
    st = savsim_scenario_set(sc, "replications", std::to_string(o.replications).c_str());
  }
  if (st != SAVSIM_OK) {
    exit_code = report_error(st);
    // Unknown override keys are a usage problem, not a data problem.
    if (st == SAVSIM_ERR_INVALID_INPUT) exit_code = kUsage;
    savsim_scenario_free(sc);
    return nullptr;
  }
  return sc;
}

int cmd_run(const Options& o, bool seeded) {
  int code = kOk;
  savsim_scenario* sc = load(o, seeded, code);
  if (!sc) return code;
  const savsim_run_options opts{o.jobs, o.verbose ? 1 : 0};
  const savsim_status st = savsim_run(sc, o.out.c_str(), &opts);
  savsim_scenario_free(sc);
  if (st != SAVSIM_OK) return report_error(st);
  std::printf("wrote %s/records.csv and %s/aggregate.csv\n", o.out.c_str(), o.out.c_str());
  return kOk;
}

int cmd_sweep(const Options& o, bool seeded) {
  int code = kOk;
  savsim_scenario* sc = load(o, seeded, code);
  if (!sc) return code;
  std::vector<const char*> names;
  for (const std::string& p : o.profiles) names.push_back(p.c_str());
  const savsim_run_options opts{o.jobs, 0};
  const savsim_status st = savsim_sweep(sc, o.fleet_sizes.data(), o.fleet_sizes.size(),
                                        names.data(), names.size(), o.out.c_str(), &opts);
  savsim_scenario_free(sc);
  if (st != SAVSIM_OK) return report_error(st);
  std::printf("wrote %s/sweep.csv and %s/sweep_aggregate.csv\n", o.out.c_str(), o.out.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared autonomous vehicle fleet simulator"};
  app.set_version_flag("--version", std::string(savsim_version()));
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a network file and print the report");
  validate->add_option("--network", o.network, "Network JSON file")->required();

  auto* oracle = app.add_subcommand("oracle-check",
                                    "Compare the stop distance table with the split-graph reference");
  oracle->add_option("--network", o.network, "Network JSON file")->required();

  auto* generate = app.add_subcommand("generate", "Write a synthetic network and scenario");
  auto* run = app.add_subcommand("run", "Run every replication of a scenario");
  auto* sweep = app.add_subcommand("sweep", "Run a fleet size by profile sweep");

  for (CLI::App* sub : {generate, run, sweep}) {
    sub->add_option("--out", o.out, "Output directory")->envname("SAVSIM_OUT")->required();
    sub->add_option("--seed", o.seed, "Seed (network layout for generate, base seed otherwise)");
  }
  for (CLI::App* sub : {run, sweep}) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    sub->add_option("--replications", o.replications, "Replications per scenario")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", o.overrides, "Override a scenario field, key=value (repeatable)");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  }
  run->add_flag("--verbose", o.verbose, "Also write per-replication event logs");
  sweep->add_option("--fleet-sizes", o.fleet_sizes, "Fleet sizes")->delimiter(',');
  sweep->add_option("--profiles", o.profiles, "Behavior profiles")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  auto seeded = [&](CLI::App* sub) { return sub->count("--seed") > 0; };
  if (*validate) return cmd_validate(o);
  if (*oracle) return cmd_oracle_check(o);
  if (*generate) return cmd_generate(o, seeded(generate));
  if (*run) return cmd_run(o, seeded(run));
  if (*sweep) return cmd_sweep(o, seeded(sweep));
  return kUsage;
}
