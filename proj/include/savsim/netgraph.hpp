#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "savsim/ids.hpp"

namespace savsim {

enum class Zone { peripheral_housing, central_opportunity, other };

std::string_view to_string(Zone zone);
Zone zone_from_string(std::string_view name);

struct Vertex {
  VertexId id;
  double x = 0.0;  // meters east
  double y = 0.0;  // meters north
};

struct DirectedEdge {
  EdgeId id;
  VertexId source;
  VertexId sink;
  double length = 0.0;           // meters
  double free_flow_speed = 0.0;  // meters/second
  int capacity_vehicles = 1;     // jam occupancy
};

// A pickup/dropoff location pinned `slack` meters after the source vertex of
// its host edge.
struct Stop {
  StopId id;
  EdgeId edge;
  double slack = 0.0;
  Zone zone = Zone::other;
};

// Euclidean length between two vertices. Throws invalid_input on non-finite
// coordinates.
double edge_weight(const Vertex& source, const Vertex& sink);

// Directed road network with registered stops. Construction is permissive so
// that malformed inputs can be loaded and reported by validate_graph(); the
// routing functions assume a graph that validates cleanly.
class RoadGraph {
 public:
  const Vertex& add_vertex(VertexId id, double x, double y);

  // Length defaults to the Euclidean distance between the endpoints. Dangling
  // endpoints and self-loops are accepted here and reported by validation.
  const DirectedEdge& add_edge(EdgeId id, VertexId source, VertexId sink, double free_flow_speed,
                               int capacity_vehicles, std::optional<double> length = std::nullopt);

  // Registers a stop under a fresh id (one past the largest id in use).
  const Stop& place_stop(EdgeId edge, double slack, Zone zone);
  // Registers a stop under a caller-chosen id.
  const Stop& add_stop(StopId id, EdgeId edge, double slack, Zone zone);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const DirectedEdge> edges() const { return edges_; }
  std::span<const Stop> stops() const { return stops_; }

  bool has_vertex(VertexId id) const { return vertex_index_.contains(id); }
  bool has_edge(EdgeId id) const { return edge_index_.contains(id); }
  bool has_stop(StopId id) const { return stop_index_.contains(id); }

  const Vertex& vertex(VertexId id) const;
  const DirectedEdge& edge(EdgeId id) const;
  const Stop& stop(StopId id) const;

  std::size_t vertex_index(VertexId id) const;
  std::size_t edge_index(EdgeId id) const;
  std::size_t stop_index(StopId id) const;

  // Indices into edges() leaving the vertex at `vertex_index`, ordered by sink
  // vertex id. Edges with a dangling endpoint are not listed.
  std::span<const std::size_t> out_edges(std::size_t vertex_index) const {
    return out_[vertex_index];
  }

 private:
  void link(std::size_t edge_index);

  std::vector<Vertex> vertices_;
  std::vector<DirectedEdge> edges_;
  std::vector<Stop> stops_;
  std::unordered_map<VertexId, std::size_t> vertex_index_;
  std::unordered_map<EdgeId, std::size_t> edge_index_;
  std::unordered_map<StopId, std::size_t> stop_index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::size_t> unlinked_;  // edges waiting for an endpoint vertex
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  dangling_endpoint,
  self_loop,
  duplicate_edge,
  not_strongly_connected,
  length_mismatch,
  bad_edge_parameter,
  bad_stop,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
  // For connectivity failures: a vertex pair (from, to) with no directed path.
  std::optional<std::pair<VertexId, VertexId>> witness;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string to_string() const;
};

ValidationReport validate_graph(const RoadGraph& graph);

// ---------------------------------------------------------------------------
// Routing

enum class TieBreak {
  lexicographic,  // smallest vertex-id sequence among equal-length paths
  seeded_random,  // uniform choice at each branching, reproducible from `seed`
};

struct RoutingOptions {
  TieBreak tie_break = TieBreak::lexicographic;
  std::uint64_t seed = 0;
};

struct VertexPath {
  std::vector<EdgeId> edges;
  double distance = 0.0;
};

// Dijkstra distances from one vertex (by index) to every vertex; unreachable
// vertices get +infinity.
std::vector<double> shortest_distances(const RoadGraph& graph, std::size_t source_index);

VertexPath shortest_path(const RoadGraph& graph, VertexId from, VertexId to,
                         const RoutingOptions& options = {});

struct StopPath {
  StopId origin;
  StopId destination;
  std::vector<EdgeId> edges;  // starts with the origin stop's host edge
  double distance = 0.0;

  bool operator==(const StopPath&) const = default;
};

// Distance a vehicle parked at `from` covers to reach `to`: the rest of the
// origin edge, the shortest vertex path to the destination edge's source, then
// the destination slack. A later stop on the same edge is reached directly.
StopPath stop_distance(const RoadGraph& graph, StopId from, StopId to,
                       const RoutingOptions& options = {});

// Recomputes a StopPath's length from its edge list and the stop slacks.
double path_length(const RoadGraph& graph, const StopPath& path);

// All ordered stop-pair paths, precomputed with one Dijkstra run per distinct
// host-edge sink vertex.
class StopDistanceTable {
 public:
  static StopDistanceTable build(const RoadGraph& graph, std::span<const Stop> stops,
                                 const RoutingOptions& options = {});
  static StopDistanceTable build(const RoadGraph& graph, const RoutingOptions& options = {}) {
    return build(graph, graph.stops(), options);
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t stop_count() const { return stop_count_; }
  std::size_t sssp_runs() const { return sssp_runs_; }

  const StopPath* find(StopId from, StopId to) const;
  // Zero for from == to; throws not_found for pairs outside the table.
  double distance(StopId from, StopId to) const;
  StopPath path(StopId from, StopId to) const;

  const std::map<std::pair<StopId, StopId>, StopPath>& entries() const { return entries_; }

 private:
  std::map<std::pair<StopId, StopId>, StopPath> entries_;
  std::size_t stop_count_ = 0;
  std::size_t sssp_runs_ = 0;
};

// Location of a vehicle: `offset` meters along `edge` from its source.
struct EdgePosition {
  EdgeId edge;
  double offset = 0.0;
};

// Distances used for planning. Positions are treated as temporary stops so
// the same traversal rule applies to vehicles between stops.
class DistanceModel {
 public:
  virtual ~DistanceModel() = default;
  virtual double between(StopId from, StopId to) const = 0;
  virtual double from_position(const EdgePosition& from, StopId to) const = 0;
};

// All-pairs vertex distances plus the stop table; answers every distance and
// next-hop query the simulator needs in O(out-degree).
class Router final : public DistanceModel {
 public:
  explicit Router(const RoadGraph& graph, const RoutingOptions& options = {});

  const RoadGraph& graph() const { return *graph_; }
  const StopDistanceTable& table() const { return table_; }

  double vertex_distance(std::size_t from_index, std::size_t to_index) const {
    return matrix_[from_index * n_ + to_index];
  }

  double between(StopId from, StopId to) const override { return table_.distance(from, to); }
  double from_position(const EdgePosition& from, StopId to) const override;

  // Edge index to take from the vertex at `vertex_index` toward the vertex at
  // `target_index`; nullopt when already there. Follows the lexicographic
  // tie-break.
  std::optional<std::size_t> next_hop(std::size_t vertex_index, std::size_t target_index) const;

  // Lexicographically smallest shortest path between two vertices, as edge
  // indices.
  std::vector<std::size_t> vertex_route(std::size_t from_index, std::size_t to_index) const;

 private:
  const RoadGraph* graph_;
  std::size_t n_ = 0;
  std::vector<double> matrix_;
  StopDistanceTable table_;
};

}  // namespace savsim
