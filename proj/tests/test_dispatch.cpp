#include <random>

#include "doctest.h"
#include "savsim/dispatch.hpp"
#include "savsim/error.hpp"
#include "support.hpp"

using namespace savsim;

namespace {

TripRequest request(std::int64_t id, std::int64_t origin, std::int64_t destination, double t,
                    int party = 1) {
  return TripRequest{RequestId{id}, StopId{origin}, StopId{destination}, t, party};
}

// Vertices 0 (0,0) and 1 (3000,0), both directions. Stops 1, 2, 3 at 500,
// 1500 and 2500 m along the eastbound edge.
struct Line {
  RoadGraph graph;
  std::unique_ptr<Router> router;

  Line() {
    graph.add_vertex(VertexId{0}, 0, 0);
    graph.add_vertex(VertexId{1}, 3000, 0);
    graph.add_edge(EdgeId{0}, VertexId{0}, VertexId{1}, 15.0, 100);
    graph.add_edge(EdgeId{1}, VertexId{1}, VertexId{0}, 15.0, 100);
    graph.add_stop(StopId{1}, EdgeId{0}, 500.0, Zone::peripheral_housing);
    graph.add_stop(StopId{2}, EdgeId{0}, 1500.0, Zone::peripheral_housing);
    graph.add_stop(StopId{3}, EdgeId{0}, 2500.0, Zone::central_opportunity);
    router = std::make_unique<Router>(graph);
  }
};

}  // namespace

TEST_CASE("select_next_request examples") {
  DispatchPolicy policy;
  Sav sav;
  testing::TableDistances d;
  d.from_vehicle = {{StopId{1}, 5000.0}, {StopId{2}, 1000.0}};

  CHECK_FALSE(select_next_request(policy, {}, sav, 0.0, d));

  std::vector<PendingRequest> pending{PendingRequest(request(1, 1, 9, 0.0)),
                                      PendingRequest(request(2, 2, 9, 600.0))};
  CHECK(select_next_request(policy, pending, sav, 1900.0, d) == RequestId{2});

  std::vector<PendingRequest> fresh{PendingRequest(request(1, 1, 9, 0.0)),
                                    PendingRequest(request(2, 2, 9, 10.0))};
  CHECK(select_next_request(policy, fresh, sav, 500.0, d) == RequestId{1});

  // Exactly at the threshold is not overdue.
  std::vector<PendingRequest> edge{PendingRequest(request(1, 1, 9, 0.0)),
                                   PendingRequest(request(2, 2, 9, 700.0))};
  CHECK(select_next_request(policy, edge, sav, 1900.0, d) == RequestId{1});

  pending[1].state = RequestState::assigned;
  CHECK(select_next_request(policy, pending, sav, 1900.0, d) == RequestId{1});
}

TEST_CASE("select_next_request matches the reference on random states") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count(0, 20);
  std::uniform_int_distribution<int> coarse_time(0, 40);
  std::uniform_int_distribution<int> coarse_dist(0, 10);
  std::uniform_int_distribution<int> state(0, 3);
  DispatchPolicy policy;
  for (int trial = 0; trial < 300; ++trial) {
    testing::TableDistances d;
    std::vector<PendingRequest> pending;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const StopId origin{i};
      d.from_vehicle[origin] = 700.0 * coarse_dist(rng);
      pending.emplace_back(request(100 - i, i, 99, 60.0 * coarse_time(rng)));
      if (state(rng) == 0) pending.back().state = RequestState::assigned;
    }
    const double now = 60.0 * coarse_time(rng) + 1200.0;
    Sav sav;
    CHECK(select_next_request(policy, pending, sav, now, d) ==
          testing::reference_select(policy, pending, sav, now, d));
  }
}

TEST_CASE("try_insert_shared examples") {
  Line line;
  DispatchPolicy policy;

  Sav sav;
  sav.position = EdgePosition{EdgeId{0}, 500.0};
  sav.onboard = {OnboardParty{RequestId{1}, 1}};
  sav.route = {RouteLeg{StopId{3}, LegAction::dropoff, RequestId{1}, 1}};
  const Sav before = sav;

  auto ins = try_insert_shared(policy, sav, request(2, 2, 3, 0.0), *line.router);
  REQUIRE(ins);
  REQUIRE(ins->route.size() == 3);
  CHECK(ins->route[0] == RouteLeg{StopId{2}, LegAction::pickup, RequestId{2}, 1});
  CHECK(ins->route[1].stop == StopId{3});
  CHECK(ins->route[2].stop == StopId{3});
  CHECK(ins->shared == line.router->between(StopId{2}, StopId{3}));
  CHECK(ins->shared == 1000.0);
  CHECK(ins->length == ins->base_length);
  CHECK(sav.route == before.route);

  CHECK_FALSE(try_insert_shared(policy, sav, request(3, 2, 3, 0.0, 5), *line.router));

  // Candidate along an existing pickup-dropoff pair: no added distance.
  Sav empty_run;
  empty_run.position = EdgePosition{EdgeId{0}, 100.0};
  empty_run.route = {RouteLeg{StopId{1}, LegAction::pickup, RequestId{7}, 1},
                     RouteLeg{StopId{3}, LegAction::dropoff, RequestId{7}, 1}};
  auto zero = try_insert_shared(policy, empty_run, request(8, 1, 3, 0.0), *line.router);
  REQUIRE(zero);
  CHECK(zero->length == zero->base_length);
  CHECK(zero->shared == 2000.0);

  // A candidate behind the vehicle needs a loop far beyond the budget.
  Sav far;
  far.position = EdgePosition{EdgeId{0}, 1600.0};
  far.onboard = {OnboardParty{RequestId{1}, 1}};
  far.route = {RouteLeg{StopId{3}, LegAction::dropoff, RequestId{1}, 1}};
  CHECK_FALSE(try_insert_shared(policy, far, request(4, 1, 3, 0.0), *line.router));
}

TEST_CASE("try_insert_shared matches exhaustive search on random instances") {
  std::mt19937_64 rng(2024);
  DispatchPolicy policy;
  int accepted = 0;
  for (int trial = 0; trial < 150; ++trial) {
    testing::RandomGraphLimits lim;
    lim.max_vertices = 12;
    lim.max_edges = 30;
    lim.min_stops = 4;
    lim.max_stops = 8;
    const RoadGraph g = testing::random_graph(rng, lim);
    const Router router(g);
    std::vector<StopId> stops;
    for (const Stop& s : g.stops()) stops.push_back(s.id);
    std::uniform_int_distribution<std::size_t> any_stop(0, stops.size() - 1);
    std::uniform_int_distribution<int> party(1, 3);

    Sav sav;
    sav.capacity = 5;
    const Stop& here = g.stops()[any_stop(rng)];
    sav.position = EdgePosition{here.edge, here.slack};
    // Up to two onboard parties (one dropoff leg each) and at most one
    // assigned pair: routes of at most four legs.
    std::uniform_int_distribution<int> onboard_count(0, 2);
    std::int64_t next_id = 0;
    const int ob = onboard_count(rng);
    for (int k = 0; k < ob; ++k) {
      const RequestId id{next_id++};
      const int size = party(rng);
      sav.onboard.push_back({id, size});
      sav.route.push_back({stops[any_stop(rng)], LegAction::dropoff, id, size});
    }
    if (rng() % 2 == 0) {
      const RequestId id{next_id++};
      const int size = party(rng);
      std::uniform_int_distribution<std::size_t> pos(0, sav.route.size());
      const std::size_t p = pos(rng);
      sav.route.insert(sav.route.begin() + static_cast<std::ptrdiff_t>(p),
                       {stops[any_stop(rng)], LegAction::pickup, id, size});
      std::uniform_int_distribution<std::size_t> dpos(p + 1, sav.route.size());
      sav.route.insert(sav.route.begin() + static_cast<std::ptrdiff_t>(dpos(rng)),
                       {stops[any_stop(rng)], LegAction::dropoff, id, size});
    }
    std::shuffle(sav.route.begin(), sav.route.end(), rng);
    if (!route_feasible(sav, sav.route)) continue;
    REQUIRE(sav.route.size() <= 4);

    const TripRequest cand{RequestId{next_id}, stops[any_stop(rng)], stops[any_stop(rng)], 0.0,
                           party(rng)};
    const auto got = try_insert_shared(policy, sav, cand, router);
    const auto want = testing::reference_best_insertion(policy, sav, cand, router);
    REQUIRE(got.has_value() == want.found);
    if (!got) continue;
    ++accepted;
    CHECK(std::abs(got->shared - want.shared) <= 1e-9);
    CHECK(got->length <= policy.detour_budget_factor * got->base_length + 1e-9);
    CHECK(route_feasible(sav, got->route));
    CHECK(std::abs(route_length(sav, got->route, router) - got->length) <= 1e-9);
  }
  CHECK(accepted > 20);
}

TEST_CASE("on_arrival") {
  Sav sav;
  sav.onboard = {OnboardParty{RequestId{1}, 1}};
  sav.route = {RouteLeg{StopId{2}, LegAction::pickup, RequestId{2}, 2},
               RouteLeg{StopId{3}, LegAction::dropoff, RequestId{2}, 2},
               RouteLeg{StopId{4}, LegAction::dropoff, RequestId{1}, 1}};
  PendingRequest waiting(request(2, 2, 3, 0.0, 2));
  waiting.advance(RequestState::assigned);

  const ArrivalOutcome up = on_arrival(sav, waiting, normal_profile(), 100.0);
  CHECK(sav.onboard_total() == 3);
  CHECK(waiting.state == RequestState::onboard);
  CHECK(up.departure_time == 112.0);
  CHECK(sav.status == SavStatus::dwelling);
  CHECK(sav.route.size() == 2);

  const ArrivalOutcome down = on_arrival(sav, waiting, cautious_profile(), 200.0);
  CHECK(down.action == LegAction::dropoff);
  CHECK(down.party_size == 2);
  CHECK(down.departure_time == 220.0);
  CHECK(waiting.state == RequestState::completed);
  CHECK(sav.onboard_total() == 1);

  PendingRequest wrong(request(5, 4, 1, 0.0));
  CHECK_THROWS_AS(on_arrival(sav, wrong, normal_profile(), 300.0), Error);
}

TEST_CASE("request state machine") {
  PendingRequest p(request(1, 1, 2, 0.0));
  CHECK_THROWS_AS(p.advance(RequestState::onboard), Error);
  p.advance(RequestState::assigned);
  CHECK_THROWS_AS(p.advance(RequestState::assigned), Error);
  p.advance(RequestState::onboard);
  p.advance(RequestState::completed);
  CHECK_THROWS_AS(p.advance(RequestState::unassigned), Error);
}

TEST_CASE("policy validation") {
  CHECK_NOTHROW(DispatchPolicy{}.validate());
  CHECK(DispatchPolicy{}.overdue_threshold == 1200.0);
  CHECK_THROWS_AS((DispatchPolicy{0.0, 1.0, 1.4, 5}.validate()), Error);
  CHECK_THROWS_AS((DispatchPolicy{1.0, 0.0, 1.4, 5}.validate()), Error);
  CHECK_THROWS_AS((DispatchPolicy{1.0, 1.0, 0.9, 5}.validate()), Error);
  CHECK_THROWS_AS((DispatchPolicy{1.0, 1.0, 1.4, 0}.validate()), Error);
}
