#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "tgnn/errors.hpp"
#include "tgnn/rng.hpp"
#include "tgnn/workload.hpp"

using namespace tgnn;

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(rng.next() == 0x06c45d188009454fULL);
}

TEST_CASE("derive_seed is stable and index-sensitive") {
  CHECK(derive_seed(42, 0) == 0x28efe333b266f103ULL);
  CHECK(derive_seed(42, 1) == 0x5fd30d2fcbef75e3ULL);
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("next_below stays in range and covers small bounds") {
  SplitMix64 rng(9);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t v = rng.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("poi_count_for uses the ceiling with an integer snap") {
  CHECK(poi_count_for(3600, 0.001) == 4);    // ceil(3.6)
  CHECK(poi_count_for(227222, 0.1) == 22723);
  CHECK(poi_count_for(22500, 0.01) == 225);  // exact product must not round up
  CHECK(poi_count_for(100, 1.0) == 100);
  CHECK_THROWS_AS(poi_count_for(100, 0.0), InvalidInput);
  CHECK_THROWS_AS(poi_count_for(100, 1.5), InvalidInput);
}

TEST_CASE("generate_pois samples distinct nodes deterministically") {
  const RoadNetwork net = make_grid_network(60);
  const auto pois = generate_pois(net, 0.01, 7);
  CHECK(pois.size() == 36);

  std::set<NodeId> nodes;
  for (const Poi& p : pois) {
    CHECK(nodes.insert(p.node).second);  // without replacement
    CHECK(p.coord == net.coord(p.node));
  }
  const auto again = generate_pois(net, 0.01, 7);
  for (std::size_t i = 0; i < pois.size(); ++i) {
    CHECK(pois[i].poi_id == again[i].poi_id);
    CHECK(pois[i].node == again[i].node);
  }
  CHECK(generate_pois(net, 0.01, 8)[0].node != pois[0].node);  // seed-sensitive (usually)

  const auto single = generate_pois(net, 1e-9, 1);
  CHECK(single.size() == 1);
}

TEST_CASE("place_query_area") {
  const RoadNetwork net = normalize(make_grid_network(40));

  SUBCASE("full-extent side covers the whole space") {
    const Mbr window = place_query_area(net, 1000.0, net.node_count(), 1);
    for (NodeId id = 0; id < net.node_count(); ++id) CHECK(window.contains(net.coord(id)));
  }
  SUBCASE("window side and determinism") {
    const Mbr a = place_query_area(net, 50.0, 4, 99);
    const Mbr b = place_query_area(net, 50.0, 4, 99);
    CHECK(a.max.x - a.min.x == doctest::Approx(50.0));
    CHECK(a.max.y - a.min.y == doctest::Approx(50.0));
    CHECK(a.min == b.min);
  }
  SUBCASE("side larger than the extent is invalid") {
    CHECK_THROWS_AS(place_query_area(net, 1500.0, 1, 1), InvalidInput);
  }
  SUBCASE("retry budget exhaustion is a hard error") {
    // Two far-apart nodes: no 10-unit window can hold both.
    const RoadNetwork sparse = RoadNetwork::build({{0, 0}, {1000, 0}}, {});
    CHECK_THROWS_AS(place_query_area(sparse, 10.0, 2, 1), InvalidInput);
  }
}

TEST_CASE("generate_group") {
  const RoadNetwork net = make_grid_network(30);
  DistanceOracle oracle(net);
  const Mbr window = place_query_area(net, 8.0, 36, 5);

  SUBCASE("trips stay inside the window, nodes distinct, legs connected") {
    const QueryGroup group = generate_group(net, oracle, window, 6, 6, 11);
    CHECK(group.size() == 6);
    for (const Trip& trip : group.trips) {
      CHECK(trip.locations.size() == 6);
      std::set<NodeId> distinct(trip.locations.begin(), trip.locations.end());
      CHECK(distinct.size() == trip.locations.size());
      for (NodeId loc : trip.locations) CHECK(window.contains(net.coord(loc)));
      for (std::size_t j = 0; j + 1 < trip.locations.size(); ++j)
        CHECK(std::isfinite(oracle.shortest_distance(trip.locations[j], trip.locations[j + 1])));
    }
  }
  SUBCASE("two-location trips are random source-destination pairs") {
    const QueryGroup group = generate_group(net, oracle, window, 3, 2, 12);
    for (const Trip& trip : group.trips) CHECK(trip.locations.size() == 2);
  }
  SUBCASE("same seed reproduces the group") {
    const QueryGroup a = generate_group(net, oracle, window, 4, 3, 13);
    const QueryGroup b = generate_group(net, oracle, window, 4, 3, 13);
    for (std::size_t i = 0; i < a.trips.size(); ++i)
      CHECK(a.trips[i].locations == b.trips[i].locations);
  }
}

TEST_CASE("make_grid_network") {
  const RoadNetwork net = make_grid_network(60);
  CHECK(net.node_count() == 3600);
  CHECK(net.edge_count() == 2 * 60 * 59);
  CHECK(net.coord(61) == Coord{1, 1});
  for (const auto& e : net.neighbors(0)) CHECK(e.weight == 1.0);

  const RoadNetwork tiny = make_grid_network(1);
  CHECK(tiny.node_count() == 1);
  CHECK(tiny.edge_count() == 0);
}
