#pragma once

#include <cstdint>
#include <vector>

#include "tgnn/road_network.hpp"

namespace tgnn {

/// One user's fixed itinerary: an ordered sequence of at least two network
/// nodes with consecutive entries distinct.
struct Trip {
  std::int32_t user_id = 0;
  std::vector<NodeId> locations;

  std::size_t length() const { return locations.size(); }
  std::size_t leg_count() const { return locations.empty() ? 0 : locations.size() - 1; }
};

struct QueryGroup {
  std::vector<Trip> trips;

  std::size_t size() const { return trips.size(); }
};

/// Throws InvalidInput when the group breaks a structural invariant
/// (empty group, duplicate user ids, short trips, repeated consecutive
/// locations, out-of-range node ids).
void validate(const QueryGroup& group, const RoadNetwork& net);

}  // namespace tgnn
