#include "savsim/routing_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "savsim/error.hpp"

namespace savsim {

namespace {

struct Arc {
  std::size_t to;
  double length;
};

// Array-scan Dijkstra, O(V^2); the augmented graphs here are small.
std::vector<double> scan_dijkstra(const std::vector<std::vector<Arc>>& adj, std::size_t source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(adj.size(), inf);
  std::vector<char> done(adj.size(), 0);
  dist[source] = 0.0;
  for (std::size_t round = 0; round < adj.size(); ++round) {
    std::size_t best = adj.size();
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if (!done[v] && std::isfinite(dist[v]) && (best == adj.size() || dist[v] < dist[best])) best = v;
    }
    if (best == adj.size()) break;
    done[best] = 1;
    for (const Arc& a : adj[best]) dist[a.to] = std::min(dist[a.to], dist[best] + a.length);
  }
  return dist;
}

}  // namespace

SplitGraphOracle::SplitGraphOracle(const RoadGraph& graph) {
  std::map<std::int64_t, std::size_t> node_of_vertex;
  for (const Vertex& v : graph.vertices()) {
    node_of_vertex.emplace(v.id.value, node_of_vertex.size());
  }
  std::vector<std::vector<Arc>> adj(node_of_vertex.size());
  auto new_node = [&] {
    adj.emplace_back();
    return adj.size() - 1;
  };

  std::map<std::int64_t, std::vector<const Stop*>> stops_on_edge;
  for (const Stop& s : graph.stops()) stops_on_edge[s.edge.value].push_back(&s);

  std::map<std::int64_t, std::size_t> node_of_stop;
  for (const DirectedEdge& e : graph.edges()) {
    auto src = node_of_vertex.find(e.source.value);
    auto dst = node_of_vertex.find(e.sink.value);
    if (src == node_of_vertex.end() || dst == node_of_vertex.end()) continue;
    auto hosted = stops_on_edge.find(e.id.value);
    if (hosted == stops_on_edge.end()) {
      adj[src->second].push_back({dst->second, e.length});
      continue;
    }
    auto list = hosted->second;
    std::sort(list.begin(), list.end(), [](const Stop* a, const Stop* b) {
      if (a->slack != b->slack) return a->slack < b->slack;
      return a->id < b->id;
    });
    // Chain source -> split points -> sink; coincident stops share a node.
    std::size_t prev = src->second;
    double prev_at = 0.0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::size_t node;
      if (i > 0 && list[i]->slack == list[i - 1]->slack) {
        node = node_of_stop.at(list[i - 1]->id.value);
      } else {
        node = new_node();
        adj[prev].push_back({node, list[i]->slack - prev_at});
        prev = node;
        prev_at = list[i]->slack;
      }
      node_of_stop[list[i]->id.value] = node;
    }
    adj[prev].push_back({dst->second, e.length - prev_at});
  }

  for (const auto& [id, node] : node_of_stop) stop_ids_.push_back(StopId{id});
  const std::size_t m = stop_ids_.size();
  matrix_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto dist = scan_dijkstra(adj, node_of_stop.at(stop_ids_[i].value));
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const std::size_t target = node_of_stop.at(stop_ids_[j].value);
      double d = dist[target];
      if (target == node_of_stop.at(stop_ids_[i].value)) {
        // Distinct stops at the same point on the same edge.
        d = 0.0;
      }
      matrix_[i * m + j] = d;
    }
  }
}

double SplitGraphOracle::distance(StopId from, StopId to) const {
  auto locate = [&](StopId id) {
    auto it = std::lower_bound(stop_ids_.begin(), stop_ids_.end(), id);
    if (it == stop_ids_.end() || *it != id) {
      fail(ErrorCode::not_found, "oracle has no stop " + std::to_string(id.value));
    }
    return static_cast<std::size_t>(it - stop_ids_.begin());
  };
  return matrix_[locate(from) * stop_ids_.size() + locate(to)];
}

std::string OracleReport::to_string() const {
  std::ostringstream out;
  out.precision(12);
  out << "pairs checked: " << pairs_checked << ", mismatches: " << mismatches.size()
      << ", max abs error: " << max_abs_error << '\n';
  for (const OracleMismatch& m : mismatches) {
    out << "  stop " << m.from << " -> stop " << m.to << ": table " << m.table << ", oracle "
        << m.oracle << '\n';
  }
  return out.str();
}

OracleReport check_stop_table(const RoadGraph& graph, const StopDistanceTable& table,
                              double tolerance) {
  const SplitGraphOracle oracle(graph);
  OracleReport report;
  for (StopId a : oracle.stops()) {
    for (StopId b : oracle.stops()) {
      if (a == b) continue;
      ++report.pairs_checked;
      const double expected = oracle.distance(a, b);
      const StopPath* entry = table.find(a, b);
      const double got = entry ? entry->distance : std::numeric_limits<double>::quiet_NaN();
      const double err = std::abs(got - expected);
      if (std::isfinite(err)) report.max_abs_error = std::max(report.max_abs_error, err);
      if (!(err <= tolerance)) report.mismatches.push_back({a, b, got, expected});
    }
  }
  return report;
}

}  // namespace savsim
