#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "savsim/ids.hpp"
#include "savsim/netgraph.hpp"

namespace savsim {

struct TripRequest {
  RequestId id;
  StopId origin;
  StopId destination;
  double request_time = 0.0;  // seconds from simulation start
  int party_size = 1;

  bool operator==(const TripRequest&) const = default;
};

// Poisson demand between the two zones. Rates are requests/hour; weights
// give the probability of party sizes 1, 2 and 3.
struct DemandProfile {
  double outbound_rate = 0.0;  // peripheral_housing -> central_opportunity
  double inbound_rate = 0.0;   // central_opportunity -> peripheral_housing
  std::array<double, 3> party_size_weights{0.7, 0.2, 0.1};
  double horizon = 4 * 3600.0;

  void validate() const;
};

// Time-ordered requests; ids are assigned 0.. in output order. Identical
// seeds give identical output.
std::vector<TripRequest> generate_requests(const DemandProfile& profile,
                                           std::span<const Stop> stops, std::uint64_t seed);

// Reads the request CSV (header `id,origin,destination,request_time_s,party_size`)
// and checks every stop against the graph. Output is sorted by time, then id.
std::vector<TripRequest> load_requests(std::istream& in, const RoadGraph& graph);
std::vector<TripRequest> load_requests(const std::filesystem::path& path, const RoadGraph& graph);

void write_requests(std::ostream& out, std::span<const TripRequest> requests);

}  // namespace savsim
