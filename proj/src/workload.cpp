#include "tgnn/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tgnn/errors.hpp"
#include "tgnn/rng.hpp"

namespace tgnn {

std::size_t poi_count_for(std::size_t node_count, double density) {
  if (!(density > 0.0) || density > 1.0)
    throw InvalidInput("POI density must be in (0, 1]");
  const double product = density * static_cast<double>(node_count);
  // Integral densities like 1% of 22500 land an ulp off 225; snap before
  // taking the ceiling.
  const double nearest = std::round(product);
  if (std::abs(product - nearest) < 1e-9 * std::max(1.0, product))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(product));
}

std::vector<Poi> generate_pois(const RoadNetwork& net, double density, std::uint64_t seed) {
  const std::size_t v = net.node_count();
  const std::size_t count = poi_count_for(v, density);

  SplitMix64 rng(seed);
  std::vector<NodeId> nodes(v);
  std::iota(nodes.begin(), nodes.end(), NodeId{0});

  std::vector<Poi> pois;
  pois.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {  // partial Fisher-Yates, without replacement
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(v - i));
    std::swap(nodes[i], nodes[j]);
    pois.push_back({static_cast<std::int32_t>(i), nodes[i], net.coord(nodes[i])});
  }
  return pois;
}

Mbr place_query_area(const RoadNetwork& net, double side, std::size_t min_nodes,
                     std::uint64_t seed, int max_retries) {
  if (!(side > 0.0)) throw InvalidInput("query area side must be positive");
  const Mbr box = net.bounding_box();
  const double extent_x = box.max.x - box.min.x;
  const double extent_y = box.max.y - box.min.y;
  if (side > std::max(extent_x, extent_y) + 1e-9)
    throw InvalidInput("query area side exceeds the network extent");

  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    const double ox = box.min.x + rng.next_unit() * std::max(0.0, extent_x - side);
    const double oy = box.min.y + rng.next_unit() * std::max(0.0, extent_y - side);
    const Mbr window{{ox, oy}, {ox + side, oy + side}};

    std::size_t inside = 0;
    for (NodeId id = 0; id < net.node_count(); ++id)
      if (window.contains(net.coord(id)) && ++inside >= min_nodes) break;
    if (inside >= min_nodes) return window;
  }
  throw InvalidInput("no query window with " + std::to_string(min_nodes) + " nodes found in " +
                     std::to_string(max_retries) + " attempts");
}

QueryGroup generate_group(const RoadNetwork& net, DistanceOracle& oracle, const Mbr& window,
                          int group_size, int trip_length, std::uint64_t seed, int max_retries) {
  if (group_size < 1) throw InvalidInput("group size must be at least 1");
  if (trip_length < 2) throw InvalidInput("trip length must be at least 2");

  std::vector<NodeId> candidates;
  for (NodeId id = 0; id < net.node_count(); ++id)
    if (window.contains(net.coord(id))) candidates.push_back(id);
  if (candidates.size() < static_cast<std::size_t>(trip_length))
    throw InvalidInput("query window holds fewer nodes than the trip length");

  SplitMix64 rng(seed);
  QueryGroup group;
  for (int u = 0; u < group_size; ++u) {
    bool placed = false;
    for (int attempt = 0; attempt < max_retries && !placed; ++attempt) {
      std::vector<NodeId> pool = candidates;
      Trip trip;
      trip.user_id = u;
      for (int j = 0; j < trip_length; ++j) {  // distinct nodes, sampled order
        const std::size_t k =
            static_cast<std::size_t>(j) +
            static_cast<std::size_t>(rng.next_below(pool.size() - static_cast<std::size_t>(j)));
        std::swap(pool[static_cast<std::size_t>(j)], pool[k]);
        trip.locations.push_back(pool[static_cast<std::size_t>(j)]);
      }

      bool connected = true;
      for (std::size_t j = 0; j + 1 < trip.locations.size() && connected; ++j)
        connected = std::isfinite(
            oracle.shortest_distance(trip.locations[j], trip.locations[j + 1]));
      if (connected) {
        group.trips.push_back(std::move(trip));
        placed = true;
      }
    }
    if (!placed)
      throw InvalidInput("no connected trip for user " + std::to_string(u) + " in " +
                         std::to_string(max_retries) + " attempts");
  }
  return group;
}

RoadNetwork make_grid_network(int side) {
  if (side < 1) throw InvalidInput("grid side must be at least 1");
  std::vector<Coord> coords;
  coords.reserve(static_cast<std::size_t>(side) * static_cast<std::size_t>(side));
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      coords.push_back({static_cast<double>(c), static_cast<double>(r)});

  std::vector<RoadNetwork::EdgeSpec> edges;
  const auto id = [side](int r, int c) { return static_cast<NodeId>(r * side + c); };
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      if (c + 1 < side) edges.push_back({id(r, c), id(r, c + 1), std::nullopt});
      if (r + 1 < side) edges.push_back({id(r, c), id(r + 1, c), std::nullopt});
    }
  return RoadNetwork::build(std::move(coords), edges);
}

}  // namespace tgnn
