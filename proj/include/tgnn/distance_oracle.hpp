#pragma once

#include <cstdint>
#include <list>
#include <queue>
#include <span>
#include <unordered_map>
#include <vector>

#include "tgnn/road_network.hpp"

namespace tgnn {

/// Exact shortest-path distances with per-source memoization.
///
/// Each source runs a single-source Dijkstra sweep that stops as soon as the
/// requested targets are settled and resumes on later queries. Distances
/// already handed out are kept in per-source fragments, so only a bounded
/// number of full sweep states is alive at a time. Unreachable targets map to
/// +infinity. Cached values equal a fresh computation bit-for-bit.
///
/// Not thread-safe: use one oracle per thread over the shared network.
class DistanceOracle {
 public:
  explicit DistanceOracle(const RoadNetwork& net, std::size_t max_active_sweeps = 4)
      : net_(net), max_active_sweeps_(max_active_sweeps) {}

  double shortest_distance(NodeId source, NodeId target);

  /// Batch lookup; the result is aligned with `targets`.
  std::vector<double> distances_to(NodeId source, std::span<const NodeId> targets);

  void clear_cache();

  /// Number of single-source sweeps started so far (restarts included).
  std::uint64_t sweeps_started() const { return sweeps_started_; }

  const RoadNetwork& network() const { return net_; }

 private:
  struct Sweep {
    NodeId source = kInvalidNode;
    std::vector<double> dist;
    std::vector<char> settled;
    // min-heap of (distance, node) with lazy deletion
    std::priority_queue<std::pair<double, NodeId>, std::vector<std::pair<double, NodeId>>,
                        std::greater<>>
        frontier;
    bool exhausted = false;
  };

  Sweep& sweep_for(NodeId source);
  void run_until_settled(Sweep& sweep, std::span<const NodeId> pending);

  const RoadNetwork& net_;
  std::size_t max_active_sweeps_;
  std::uint64_t sweeps_started_ = 0;
  std::list<Sweep> active_;  // front = most recently used
  std::unordered_map<NodeId, std::unordered_map<NodeId, double>> fragments_;
};

}  // namespace tgnn
