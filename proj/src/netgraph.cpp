#include "savsim/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "savsim/error.hpp"

namespace savsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(VertexId id) { return "vertex " + std::to_string(id.value); }

// An edge u->v lies on some shortest path from the source when it is tight
// with respect to the distance labels.
bool tight(double from_dist, double length, double to_dist) {
  if (!std::isfinite(from_dist) || !std::isfinite(to_dist)) return false;
  return from_dist + length <= to_dist + 1e-9 * std::max(1.0, to_dist);
}

// Walks the shortest-path DAG from `source` to `target`, choosing among tight
// successors that can still reach the target. Lexicographic mode takes the
// smallest sink id at every branch, which yields the smallest vertex-id
// sequence overall.
std::vector<std::size_t> extract_path(const RoadGraph& graph, std::size_t source,
                                      const std::vector<double>& dist, std::size_t target,
                                      const RoutingOptions& options, std::mt19937_64* rng) {
  if (source == target) return {};
  if (!std::isfinite(dist[target])) {
    fail(ErrorCode::invalid_input, "no directed path from " +
                                       describe(graph.vertices()[source].id) + " to " +
                                       describe(graph.vertices()[target].id));
  }
  const auto vertices = graph.vertices();
  const auto edges = graph.edges();

  // Vertices from which the target is reachable inside the DAG.
  std::vector<char> reaches(vertices.size(), 0);
  reaches[target] = 1;
  std::vector<std::size_t> order(vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return a < b;
  });
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t u : order) {
      if (reaches[u] || !std::isfinite(dist[u]) || dist[u] > dist[target]) continue;
      for (std::size_t e : graph.out_edges(u)) {
        const std::size_t v = graph.vertex_index(edges[e].sink);
        if (reaches[v] && tight(dist[u], edges[e].length, dist[v])) {
          reaches[u] = 1;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<std::size_t> path;
  std::vector<char> visited(vertices.size(), 0);
  std::size_t cur = source;
  visited[cur] = 1;
  std::vector<std::size_t> candidates;
  while (cur != target) {
    candidates.clear();
    for (std::size_t e : graph.out_edges(cur)) {
      const std::size_t v = graph.vertex_index(edges[e].sink);
      if (reaches[v] && !visited[v] && tight(dist[cur], edges[e].length, dist[v])) {
        candidates.push_back(e);
      }
    }
    if (candidates.empty()) {
      fail(ErrorCode::internal, "shortest-path extraction stalled at " +
                                    describe(vertices[cur].id));
    }
    std::size_t pick = candidates.front();
    if (options.tie_break == TieBreak::seeded_random && candidates.size() > 1) {
      std::uniform_int_distribution<std::size_t> uniform(0, candidates.size() - 1);
      pick = candidates[uniform(*rng)];
    }
    path.push_back(pick);
    cur = graph.vertex_index(edges[pick].sink);
    visited[cur] = 1;
  }
  return path;
}

}  // namespace

std::string_view to_string(Zone zone) {
  switch (zone) {
    case Zone::peripheral_housing:
      return "peripheral_housing";
    case Zone::central_opportunity:
      return "central_opportunity";
    case Zone::other:
      return "other";
  }
  return "other";
}

Zone zone_from_string(std::string_view name) {
  if (name == "peripheral_housing") return Zone::peripheral_housing;
  if (name == "central_opportunity") return Zone::central_opportunity;
  if (name == "other") return Zone::other;
  fail(ErrorCode::invalid_input, "unknown zone '" + std::string(name) + "'");
}

double edge_weight(const Vertex& source, const Vertex& sink) {
  if (!std::isfinite(source.x) || !std::isfinite(source.y) || !std::isfinite(sink.x) ||
      !std::isfinite(sink.y)) {
    fail(ErrorCode::invalid_input, "non-finite vertex coordinates");
  }
  return std::hypot(sink.x - source.x, sink.y - source.y);
}

// ---------------------------------------------------------------------------
// RoadGraph

const Vertex& RoadGraph::add_vertex(VertexId id, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    fail(ErrorCode::invalid_input, describe(id) + " has non-finite coordinates");
  }
  if (vertex_index_.contains(id)) fail(ErrorCode::invalid_input, "duplicate " + describe(id));
  vertex_index_.emplace(id, vertices_.size());
  vertices_.push_back(Vertex{id, x, y});
  out_.emplace_back();

  auto pending = std::move(unlinked_);
  unlinked_.clear();
  for (std::size_t e : pending) link(e);
  return vertices_.back();
}

const DirectedEdge& RoadGraph::add_edge(EdgeId id, VertexId source, VertexId sink,
                                        double free_flow_speed, int capacity_vehicles,
                                        std::optional<double> length) {
  if (edge_index_.contains(id)) {
    fail(ErrorCode::invalid_input, "duplicate edge " + std::to_string(id.value));
  }
  DirectedEdge edge{id, source, sink, 0.0, free_flow_speed, capacity_vehicles};
  if (length) {
    edge.length = *length;
  } else if (has_vertex(source) && has_vertex(sink)) {
    edge.length = edge_weight(vertex(source), vertex(sink));
  } else {
    edge.length = std::numeric_limits<double>::quiet_NaN();
  }
  edge_index_.emplace(id, edges_.size());
  edges_.push_back(edge);
  link(edges_.size() - 1);
  return edges_.back();
}

void RoadGraph::link(std::size_t e) {
  const DirectedEdge& edge = edges_[e];
  auto src = vertex_index_.find(edge.source);
  auto dst = vertex_index_.find(edge.sink);
  if (src == vertex_index_.end() || dst == vertex_index_.end()) {
    unlinked_.push_back(e);
    return;
  }
  if (std::isnan(edges_[e].length)) {
    edges_[e].length = edge_weight(vertices_[src->second], vertices_[dst->second]);
  }
  auto& list = out_[src->second];
  auto pos = std::upper_bound(list.begin(), list.end(), e, [&](std::size_t a, std::size_t b) {
    if (edges_[a].sink != edges_[b].sink) return edges_[a].sink < edges_[b].sink;
    return edges_[a].id < edges_[b].id;
  });
  list.insert(pos, e);
}

const Stop& RoadGraph::place_stop(EdgeId edge, double slack, Zone zone) {
  std::int64_t next = 0;
  for (const Stop& s : stops_) next = std::max(next, s.id.value + 1);
  return add_stop(StopId{next}, edge, slack, zone);
}

const Stop& RoadGraph::add_stop(StopId id, EdgeId edge_id, double slack, Zone zone) {
  if (stop_index_.contains(id)) {
    fail(ErrorCode::invalid_input, "duplicate stop " + std::to_string(id.value));
  }
  const DirectedEdge& host = edge(edge_id);
  if (!std::isfinite(slack) || slack < 0.0 || slack > host.length) {
    std::ostringstream msg;
    msg << "stop slack " << slack << " outside [0, " << host.length << "] on edge " << edge_id;
    fail(ErrorCode::invalid_input, msg.str());
  }
  stop_index_.emplace(id, stops_.size());
  stops_.push_back(Stop{id, edge_id, slack, zone});
  return stops_.back();
}

const Vertex& RoadGraph::vertex(VertexId id) const { return vertices_[vertex_index(id)]; }
const DirectedEdge& RoadGraph::edge(EdgeId id) const { return edges_[edge_index(id)]; }
const Stop& RoadGraph::stop(StopId id) const { return stops_[stop_index(id)]; }

std::size_t RoadGraph::vertex_index(VertexId id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) fail(ErrorCode::not_found, "unknown " + describe(id));
  return it->second;
}

std::size_t RoadGraph::edge_index(EdgeId id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) {
    fail(ErrorCode::not_found, "unknown edge " + std::to_string(id.value));
  }
  return it->second;
}

std::size_t RoadGraph::stop_index(StopId id) const {
  auto it = stop_index_.find(id);
  if (it == stop_index_.end()) {
    fail(ErrorCode::not_found, "unknown stop " + std::to_string(id.value));
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::dangling_endpoint:
      return "dangling_endpoint";
    case ViolationKind::self_loop:
      return "self_loop";
    case ViolationKind::duplicate_edge:
      return "duplicate_edge";
    case ViolationKind::not_strongly_connected:
      return "not_strongly_connected";
    case ViolationKind::length_mismatch:
      return "length_mismatch";
    case ViolationKind::bad_edge_parameter:
      return "bad_edge_parameter";
    case ViolationKind::bad_stop:
      return "bad_stop";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << savsim::to_string(v.kind) << ": " << v.message << '\n';
  }
  return out.str();
}

ValidationReport validate_graph(const RoadGraph& graph) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string message) {
    report.violations.push_back(Violation{kind, std::move(message), std::nullopt});
  };

  std::map<std::pair<VertexId, VertexId>, EdgeId> seen;
  for (const DirectedEdge& e : graph.edges()) {
    const std::string name = "edge " + std::to_string(e.id.value);
    const bool has_src = graph.has_vertex(e.source);
    const bool has_dst = graph.has_vertex(e.sink);
    if (!has_src) add(ViolationKind::dangling_endpoint, name + " source " + describe(e.source) + " does not exist");
    if (!has_dst) add(ViolationKind::dangling_endpoint, name + " sink " + describe(e.sink) + " does not exist");
    if (e.source == e.sink) add(ViolationKind::self_loop, name + " starts and ends at " + describe(e.source));
    if (!(e.free_flow_speed > 0.0) || !std::isfinite(e.free_flow_speed)) {
      add(ViolationKind::bad_edge_parameter, name + " free_flow_speed must be positive");
    }
    if (e.capacity_vehicles < 1) {
      add(ViolationKind::bad_edge_parameter, name + " capacity_vehicles must be at least 1");
    }
    if (has_src && has_dst) {
      const double expected = edge_weight(graph.vertex(e.source), graph.vertex(e.sink));
      if (!std::isfinite(e.length) ||
          std::abs(e.length - expected) > 1e-9 * std::max(expected, 1.0)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << name << " length " << e.length << " differs from Euclidean distance " << expected;
        add(ViolationKind::length_mismatch, msg.str());
      }
    }
    auto [it, inserted] = seen.emplace(std::make_pair(e.source, e.sink), e.id);
    if (!inserted) {
      add(ViolationKind::duplicate_edge, name + " duplicates edge " +
                                             std::to_string(it->second.value) + " (" +
                                             describe(e.source) + " -> " + describe(e.sink) + ")");
    }
  }

  for (const Stop& s : graph.stops()) {
    const std::string name = "stop " + std::to_string(s.id.value);
    if (!graph.has_edge(s.edge)) {
      add(ViolationKind::bad_stop, name + " references unknown edge " + std::to_string(s.edge.value));
    } else if (s.slack < 0.0 || s.slack > graph.edge(s.edge).length) {
      add(ViolationKind::bad_stop, name + " slack outside its edge");
    }
  }

  const auto vertices = graph.vertices();
  if (vertices.size() > 1) {
    const auto edges = graph.edges();
    std::vector<std::vector<std::size_t>> reverse(vertices.size());
    for (std::size_t u = 0; u < vertices.size(); ++u) {
      for (std::size_t e : graph.out_edges(u)) reverse[graph.vertex_index(edges[e].sink)].push_back(u);
    }
    auto sweep = [&](bool forward) {
      std::vector<char> mark(vertices.size(), 0);
      std::vector<std::size_t> stack{0};
      mark[0] = 1;
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        if (forward) {
          for (std::size_t e : graph.out_edges(u)) {
            const std::size_t v = graph.vertex_index(edges[e].sink);
            if (!mark[v]) mark[v] = 1, stack.push_back(v);
          }
        } else {
          for (std::size_t v : reverse[u]) {
            if (!mark[v]) mark[v] = 1, stack.push_back(v);
          }
        }
      }
      return mark;
    };
    const VertexId root = vertices[0].id;
    auto witness = [&](VertexId from, VertexId to) {
      report.violations.push_back(Violation{
          ViolationKind::not_strongly_connected,
          "no directed path from " + describe(from) + " to " + describe(to),
          std::make_pair(from, to)});
    };
    const auto reached = sweep(true);
    auto miss = std::find(reached.begin(), reached.end(), 0);
    if (miss != reached.end()) {
      witness(root, vertices[static_cast<std::size_t>(miss - reached.begin())].id);
    } else {
      const auto back = sweep(false);
      auto stuck = std::find(back.begin(), back.end(), 0);
      if (stuck != back.end()) witness(vertices[static_cast<std::size_t>(stuck - back.begin())].id, root);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Routing

std::vector<double> shortest_distances(const RoadGraph& graph, std::size_t source_index) {
  const auto edges = graph.edges();
  std::vector<double> dist(graph.vertices().size(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source_index] = 0.0;
  heap.emplace(0.0, source_index);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (std::size_t e : graph.out_edges(u)) {
      const std::size_t v = graph.vertex_index(edges[e].sink);
      const double nd = d + edges[e].length;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

VertexPath shortest_path(const RoadGraph& graph, VertexId from, VertexId to,
                         const RoutingOptions& options) {
  const std::size_t s = graph.vertex_index(from);
  const std::size_t t = graph.vertex_index(to);
  VertexPath result;
  if (s == t) return result;
  std::mt19937_64 rng(options.seed);
  const auto dist = shortest_distances(graph, s);
  for (std::size_t e : extract_path(graph, s, dist, t, options, &rng)) {
    result.edges.push_back(graph.edges()[e].id);
    result.distance += graph.edges()[e].length;
  }
  return result;
}

double path_length(const RoadGraph& graph, const StopPath& path) {
  if (path.edges.empty()) return 0.0;
  const Stop& from = graph.stop(path.origin);
  const Stop& to = graph.stop(path.destination);
  if (path.edges.size() == 1) return to.slack - from.slack;
  double total = graph.edge(path.edges.front()).length - from.slack;
  for (std::size_t i = 1; i + 1 < path.edges.size(); ++i) total += graph.edge(path.edges[i]).length;
  return total + to.slack;
}

namespace {

// Builds the stop path given Dijkstra labels rooted at the origin edge's sink.
StopPath assemble_stop_path(const RoadGraph& graph, const Stop& from, const Stop& to,
                            const std::vector<double>& dist_from_sink,
                            const RoutingOptions& options, std::mt19937_64* rng) {
  StopPath path{from.id, to.id, {}, 0.0};
  if (from.id == to.id) return path;
  if (from.edge == to.edge && to.slack >= from.slack) {
    path.edges.push_back(from.edge);
  } else {
    const DirectedEdge& out = graph.edge(from.edge);
    const DirectedEdge& in = graph.edge(to.edge);
    path.edges.push_back(out.id);
    for (std::size_t e : extract_path(graph, graph.vertex_index(out.sink), dist_from_sink,
                                      graph.vertex_index(in.source), options, rng)) {
      path.edges.push_back(graph.edges()[e].id);
    }
    path.edges.push_back(in.id);
  }
  path.distance = path_length(graph, path);
  return path;
}

}  // namespace

StopPath stop_distance(const RoadGraph& graph, StopId from, StopId to,
                       const RoutingOptions& options) {
  const Stop& a = graph.stop(from);
  const Stop& b = graph.stop(to);
  std::mt19937_64 rng(options.seed);
  std::vector<double> dist;
  if (from != to && !(a.edge == b.edge && b.slack >= a.slack)) {
    dist = shortest_distances(graph, graph.vertex_index(graph.edge(a.edge).sink));
  }
  return assemble_stop_path(graph, a, b, dist, options, &rng);
}

StopDistanceTable StopDistanceTable::build(const RoadGraph& graph, std::span<const Stop> stops,
                                           const RoutingOptions& options) {
  if (stops.size() < 2) {
    fail(ErrorCode::invalid_input, "a stop distance table needs at least two stops");
  }
  std::vector<Stop> sorted;
  for (const Stop& s : stops) sorted.push_back(graph.stop(s.id));
  std::sort(sorted.begin(), sorted.end(), [](const Stop& a, const Stop& b) { return a.id < b.id; });

  // Group origins by the sink of their host edge; each group shares one run.
  std::map<std::size_t, std::vector<const Stop*>> by_sink;
  for (const Stop& s : sorted) by_sink[graph.vertex_index(graph.edge(s.edge).sink)].push_back(&s);

  StopDistanceTable table;
  table.stop_count_ = sorted.size();
  std::mt19937_64 rng(options.seed);
  for (const auto& [sink, origins] : by_sink) {
    const auto dist = shortest_distances(graph, sink);
    ++table.sssp_runs_;
    for (const Stop* from : origins) {
      for (const Stop& to : sorted) {
        if (to.id == from->id) continue;
        table.entries_.emplace(std::make_pair(from->id, to.id),
                               assemble_stop_path(graph, *from, to, dist, options, &rng));
      }
    }
  }
  return table;
}

const StopPath* StopDistanceTable::find(StopId from, StopId to) const {
  auto it = entries_.find({from, to});
  return it == entries_.end() ? nullptr : &it->second;
}

double StopDistanceTable::distance(StopId from, StopId to) const {
  if (from == to) return 0.0;
  if (const StopPath* p = find(from, to)) return p->distance;
  fail(ErrorCode::not_found, "no table entry for stops " + std::to_string(from.value) + " -> " +
                                 std::to_string(to.value));
}

StopPath StopDistanceTable::path(StopId from, StopId to) const {
  if (from == to) return StopPath{from, to, {}, 0.0};
  if (const StopPath* p = find(from, to)) return *p;
  fail(ErrorCode::not_found, "no table entry for stops " + std::to_string(from.value) + " -> " +
                                 std::to_string(to.value));
}

// ---------------------------------------------------------------------------
// Router

Router::Router(const RoadGraph& graph, const RoutingOptions& options)
    : graph_(&graph), n_(graph.vertices().size()) {
  matrix_.resize(n_ * n_);
  for (std::size_t s = 0; s < n_; ++s) {
    const auto dist = shortest_distances(graph, s);
    std::copy(dist.begin(), dist.end(), matrix_.begin() + static_cast<std::ptrdiff_t>(s * n_));
  }
  if (graph.stops().size() >= 2) table_ = StopDistanceTable::build(graph, options);
}

double Router::from_position(const EdgePosition& from, StopId to) const {
  const Stop& target = graph_->stop(to);
  const DirectedEdge& here = graph_->edge(from.edge);
  if (from.edge == target.edge && target.slack >= from.offset) return target.slack - from.offset;
  const DirectedEdge& in = graph_->edge(target.edge);
  return (here.length - from.offset) +
         vertex_distance(graph_->vertex_index(here.sink), graph_->vertex_index(in.source)) +
         target.slack;
}

std::optional<std::size_t> Router::next_hop(std::size_t vertex_index,
                                            std::size_t target_index) const {
  if (vertex_index == target_index) return std::nullopt;
  const auto edges = graph_->edges();
  const double here = vertex_distance(vertex_index, target_index);
  if (!std::isfinite(here)) {
    fail(ErrorCode::invalid_input, "target vertex unreachable from " +
                                       describe(graph_->vertices()[vertex_index].id));
  }
  for (std::size_t e : graph_->out_edges(vertex_index)) {
    const std::size_t v = graph_->vertex_index(edges[e].sink);
    const double rest = vertex_distance(v, target_index);
    if (v != vertex_index && std::isfinite(rest) &&
        edges[e].length + rest <= here + 1e-9 * std::max(1.0, here)) {
      return e;
    }
  }
  fail(ErrorCode::internal, "no next hop from " + describe(graph_->vertices()[vertex_index].id));
}

std::vector<std::size_t> Router::vertex_route(std::size_t from_index, std::size_t to_index) const {
  std::vector<std::size_t> route;
  std::size_t cur = from_index;
  while (auto e = next_hop(cur, to_index)) {
    route.push_back(*e);
    cur = graph_->vertex_index(graph_->edges()[*e].sink);
    if (route.size() > n_) fail(ErrorCode::internal, "vertex route did not terminate");
  }
  return route;
}

}  // namespace savsim
