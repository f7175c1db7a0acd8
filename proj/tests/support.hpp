#pragma once

// Fixtures and brute-force reference implementations shared by the unit tests
// and the acceptance binary. Nothing here calls into the routing or dispatch
// code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "savsim/dispatch.hpp"
#include "savsim/netgraph.hpp"

namespace savsim::testing {

struct RandomGraphLimits {
  int max_vertices = 30;
  int max_edges = 80;
  int min_stops = 2;
  int max_stops = 10;
};

// Strongly connected by construction: a random Hamiltonian cycle plus extra
// random edges. Coordinates are on a coarse lattice so equal-length routes
// occur. Some stops share a host edge, some sit on the edge endpoints.
inline RoadGraph random_graph(std::mt19937_64& rng, const RandomGraphLimits& lim = {}) {
  std::uniform_int_distribution<int> vcount(2, lim.max_vertices);
  const int n = vcount(rng);
  std::uniform_int_distribution<int> coord(0, 20);
  RoadGraph g;
  std::set<std::pair<int, int>> used_xy;
  for (int v = 0; v < n; ++v) {
    std::pair<int, int> xy;
    do {
      xy = {coord(rng), coord(rng)};
    } while (!used_xy.insert(xy).second);
    g.add_vertex(VertexId{v}, 100.0 * xy.first, 100.0 * xy.second);
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::shuffle(order.begin(), order.end(), rng);

  std::set<std::pair<int, int>> arcs;
  std::int64_t next_edge = 0;
  std::uniform_int_distribution<int> cap(1, 40);
  auto add = [&](int a, int b) {
    if (a == b || !arcs.insert({a, b}).second) return;
    g.add_edge(EdgeId{next_edge++}, VertexId{a}, VertexId{b}, 15.0, cap(rng));
  };
  for (int i = 0; i < n; ++i) add(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>((i + 1) % n)]);
  const int max_arcs = std::min(lim.max_edges, n * (n - 1));
  std::uniform_int_distribution<int> target(static_cast<int>(arcs.size()), max_arcs);
  const int want = target(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int tries = 0; static_cast<int>(arcs.size()) < want && tries < 10000; ++tries) {
    add(pick(rng), pick(rng));
  }

  std::uniform_int_distribution<int> scount(lim.min_stops, lim.max_stops);
  const int m = scount(rng);
  std::uniform_int_distribution<std::size_t> edge_pick(0, g.edges().size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < m; ++s) {
    // Every third stop reuses the previous stop's edge when possible.
    const std::size_t e = (s % 3 == 2) ? g.edge_index(g.stops().back().edge) : edge_pick(rng);
    const DirectedEdge& edge = g.edges()[e];
    const double r = unit(rng);
    const double slack = r < 0.1 ? 0.0 : r < 0.2 ? edge.length : unit(rng) * edge.length;
    g.place_stop(edge.id, slack, s % 2 == 0 ? Zone::peripheral_housing : Zone::central_opportunity);
  }
  return g;
}

// Stop-to-stop distances on the graph with every stop inserted as a vertex,
// computed with Bellman-Ford relaxation. Stops at the same spot on an edge
// are the same point.
class SplitGraphReference {
 public:
  explicit SplitGraphReference(const RoadGraph& g) {
    std::map<std::int64_t, std::size_t> vertex_node;
    for (const Vertex& v : g.vertices()) vertex_node[v.id.value] = nodes_++;
    std::map<std::pair<std::int64_t, double>, std::size_t> spot;
    for (const DirectedEdge& e : g.edges()) {
      std::vector<std::pair<double, std::size_t>> points{{0.0, vertex_node.at(e.source.value)}};
      for (const Stop& s : g.stops()) {
        if (s.edge != e.id) continue;
        auto [it, fresh] = spot.try_emplace({e.id.value, s.slack}, nodes_);
        if (fresh) {
          ++nodes_;
          points.push_back({s.slack, it->second});
        }
        stop_node_[s.id] = it->second;
      }
      points.push_back({e.length, vertex_node.at(e.sink.value)});
      std::stable_sort(points.begin(), points.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t k = 1; k < points.size(); ++k) {
        arcs_.push_back({points[k - 1].second, points[k].second, points[k].first - points[k - 1].first});
      }
    }
  }

  double distance(StopId from, StopId to) const {
    const std::size_t source = stop_node_.at(from);
    auto it = cache_.find(source);
    if (it == cache_.end()) it = cache_.emplace(source, relax(source)).first;
    return it->second[stop_node_.at(to)];
  }

 private:
  struct Arc {
    std::size_t from, to;
    double length;
  };

  std::vector<double> relax(std::size_t source) const {
    std::vector<double> d(nodes_, std::numeric_limits<double>::infinity());
    d[source] = 0.0;
    for (std::size_t round = 0; round + 1 < nodes_; ++round) {
      bool changed = false;
      for (const Arc& a : arcs_) {
        if (d[a.from] + a.length < d[a.to]) {
          d[a.to] = d[a.from] + a.length;
          changed = true;
        }
      }
      if (!changed) break;
    }
    return d;
  }

  std::size_t nodes_ = 0;
  std::vector<Arc> arcs_;
  std::map<StopId, std::size_t> stop_node_;
  mutable std::map<std::size_t, std::vector<double>> cache_;
};

// Reference for the two-tier selection rule: build both candidate sets
// explicitly and sort them.
inline std::optional<RequestId> reference_select(const DispatchPolicy& policy,
                                                 std::span<const PendingRequest> pending,
                                                 const Sav& sav, double now,
                                                 const DistanceModel& distances) {
  std::vector<const PendingRequest*> open;
  for (const PendingRequest& p : pending) {
    if (p.state == RequestState::unassigned) open.push_back(&p);
  }
  if (open.empty()) return std::nullopt;
  std::vector<const PendingRequest*> urgent;
  for (const PendingRequest* p : open) {
    if (now - p->wait_start > policy.overdue_threshold &&
        distances.from_position(sav.position, p->request.origin) <= policy.priority_radius) {
      urgent.push_back(p);
    }
  }
  if (!urgent.empty()) {
    std::sort(urgent.begin(), urgent.end(), [&](const PendingRequest* a, const PendingRequest* b) {
      const double wa = now - a->wait_start, wb = now - b->wait_start;
      if (wa != wb) return wa > wb;
      return a->request.id < b->request.id;
    });
    return urgent.front()->request.id;
  }
  std::sort(open.begin(), open.end(), [](const PendingRequest* a, const PendingRequest* b) {
    if (a->request.request_time != b->request.request_time) {
      return a->request.request_time < b->request.request_time;
    }
    return a->request.id < b->request.id;
  });
  return open.front()->request.id;
}

struct ReferenceInsertion {
  bool found = false;
  double shared = 0.0;
  double length = 0.0;
};

// Exhaustive search over every (pickup slot, dropoff slot) placement in the
// extended route, scoring each by walking it hop by hop with a set of riding
// request ids.
inline ReferenceInsertion reference_best_insertion(const DispatchPolicy& policy, const Sav& sav,
                                                   const TripRequest& candidate,
                                                   const DistanceModel& distances) {
  const std::size_t total = sav.route.size() + 2;
  auto hop = [&](std::size_t k, const std::vector<RouteLeg>& legs) {
    return k == 0 ? distances.from_position(sav.position, legs[0].stop)
                  : distances.between(legs[k - 1].stop, legs[k].stop);
  };
  double base = 0.0;
  for (std::size_t k = 0; k < sav.route.size(); ++k) base += hop(k, sav.route);

  ReferenceInsertion best;
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t d = p + 1; d < total; ++d) {
      std::vector<RouteLeg> legs;
      std::size_t old = 0;
      for (std::size_t k = 0; k < total; ++k) {
        if (k == p) {
          legs.push_back({candidate.origin, LegAction::pickup, candidate.id, candidate.party_size});
        } else if (k == d) {
          legs.push_back({candidate.destination, LegAction::dropoff, candidate.id, candidate.party_size});
        } else {
          legs.push_back(sav.route[old++]);
        }
      }
      std::map<RequestId, int> riding;
      for (const OnboardParty& o : sav.onboard) riding[o.request] = o.party_size;
      auto load = [&] {
        int sum = 0;
        for (const auto& [id, size] : riding) sum += size;
        return sum;
      };
      bool ok = load() <= sav.capacity;
      double length = 0.0, shared = 0.0;
      for (std::size_t k = 0; k < legs.size() && ok; ++k) {
        const double h = hop(k, legs);
        length += h;
        if (riding.size() >= 2) shared += h;
        if (legs[k].action == LegAction::pickup) {
          riding[legs[k].request] = legs[k].party_size;
          ok = load() <= sav.capacity;
        } else {
          ok = riding.erase(legs[k].request) == 1;
        }
      }
      if (!ok || length > policy.detour_budget_factor * base) continue;
      if (!best.found || shared > best.shared) best = {true, shared, length};
    }
  }
  return best;
}

// Distances from an explicit table, for dispatcher states that need no graph.
class TableDistances final : public DistanceModel {
 public:
  std::map<std::pair<StopId, StopId>, double> pairs;
  std::map<StopId, double> from_vehicle;

  double between(StopId a, StopId b) const override {
    return a == b ? 0.0 : pairs.at({a, b});
  }
  double from_position(const EdgePosition&, StopId to) const override { return from_vehicle.at(to); }
};

}  // namespace savsim::testing
