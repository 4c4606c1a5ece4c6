#pragma once

#include <cstdint>
#include <vector>

#include "tgnn/distance_oracle.hpp"
#include "tgnn/poi_index.hpp"
#include "tgnn/road_network.hpp"
#include "tgnn/trip.hpp"

namespace tgnn {

/// One experiment configuration cell.
struct WorkloadSpec {
  int group_size = 6;         // n
  int trip_length = 6;        // m, shared by all users
  double poi_density = 0.01;  // rho, fraction of network nodes carrying a POI
  double query_area = 50.0;   // QA, window side length in planar units
  std::uint64_t seed = 0;
  int repetitions = 30;
};

/// ceil(density * node_count); density must be in (0, 1].
std::size_t poi_count_for(std::size_t node_count, double density);

/// Samples ceil(density * v) distinct network nodes uniformly without
/// replacement; poi_id is the sample position. Deterministic per seed.
std::vector<Poi> generate_pois(const RoadNetwork& net, double density, std::uint64_t seed);

/// Uniformly places a square window of the given side inside the network
/// bounding box, retrying until it contains at least `min_nodes` nodes.
/// Throws InvalidInput when the retry budget runs out.
Mbr place_query_area(const RoadNetwork& net, double side, std::size_t min_nodes,
                     std::uint64_t seed, int max_retries = 100);

/// Samples each user's trip as `trip_length` distinct nodes inside the window
/// (in sampled order), resampling a bounded number of times until every leg is
/// connected. Throws InvalidInput when the retry budget runs out.
QueryGroup generate_group(const RoadNetwork& net, DistanceOracle& oracle, const Mbr& window,
                          int group_size, int trip_length, std::uint64_t seed,
                          int max_retries = 100);

/// side x side lattice with unit spacing; node (row, col) has id row*side+col
/// and coordinate (col, row). Edge weights are the unit spacing.
RoadNetwork make_grid_network(int side);

}  // namespace tgnn
