#pragma once

#include <filesystem>
#include <string>

#include "savsim/netgraph.hpp"
#include "json.hpp"

namespace savsim {

// Builds a graph from the network JSON document without validating it.
// Structural problems that prevent construction (duplicate ids, stops on
// unknown edges) throw invalid_input.
RoadGraph network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const RoadGraph& graph);

// Reads a network file without validating it (for reporting).
RoadGraph read_network_file(const std::filesystem::path& path);

// Reads a network file and rejects it with a config error listing every
// violation when validate_graph() is not clean.
RoadGraph load_network(const std::filesystem::path& path);

void save_network(const RoadGraph& graph, const std::filesystem::path& path);

}  // namespace savsim
