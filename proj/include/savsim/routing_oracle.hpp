#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "savsim/netgraph.hpp"

namespace savsim {

// Independent reference for stop-to-stop distances: every stop becomes a real
// vertex splitting its host edge, and plain Dijkstra runs on the augmented
// graph. Shares no code with the production routing path.
class SplitGraphOracle {
 public:
  explicit SplitGraphOracle(const RoadGraph& graph);

  // Stop ids in ascending order; indexes the matrix returned by distances().
  const std::vector<StopId>& stops() const { return stop_ids_; }
  double distance(StopId from, StopId to) const;

 private:
  std::vector<StopId> stop_ids_;
  std::vector<double> matrix_;  // stop_ids_.size()^2, row = origin
};

struct OracleMismatch {
  StopId from;
  StopId to;
  double table = 0.0;
  double oracle = 0.0;
};

struct OracleReport {
  std::size_t pairs_checked = 0;
  double max_abs_error = 0.0;
  std::vector<OracleMismatch> mismatches;

  bool ok() const { return mismatches.empty(); }
  std::string to_string() const;
};

OracleReport check_stop_table(const RoadGraph& graph, const StopDistanceTable& table,
                              double tolerance = 1e-9);

}  // namespace savsim
