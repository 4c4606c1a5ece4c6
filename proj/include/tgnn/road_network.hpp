#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tgnn/geometry.hpp"

namespace tgnn {

using NodeId = std::uint32_t;
inline constexpr NodeId kInvalidNode = static_cast<NodeId>(-1);

/// Undirected weighted road graph with planar node coordinates.
/// Immutable after construction and safe to read from many threads.
class RoadNetwork {
 public:
  struct Edge {
    NodeId to = kInvalidNode;
    double weight = 0.0;
  };

  /// Edge as specified by a caller or an input file. A missing weight is
  /// filled with the Euclidean distance between the endpoints.
  struct EdgeSpec {
    NodeId u = kInvalidNode;
    NodeId v = kInvalidNode;
    std::optional<double> weight;
  };

  RoadNetwork() = default;

  /// Validates and builds the adjacency. Duplicate undirected edges keep the
  /// minimum weight. Throws InvalidInput on self-loops, dangling endpoints,
  /// non-positive weights, or weights below the endpoint Euclidean distance.
  static RoadNetwork build(std::vector<Coord> coords, std::span<const EdgeSpec> edges);

  std::size_t node_count() const { return coords_.size(); }
  std::size_t edge_count() const { return edge_count_; }  // undirected count
  const Coord& coord(NodeId id) const { return coords_[id]; }
  std::span<const Edge> neighbors(NodeId id) const { return adjacency_[id]; }
  Mbr bounding_box() const;

 private:
  friend RoadNetwork normalize(const RoadNetwork& net);

  std::vector<Coord> coords_;
  std::vector<std::vector<Edge>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Parses the node/edge text format (see README). Non-contiguous node ids are
/// remapped to 0..n-1 and the mapping written to "<node_file>.remap".
RoadNetwork load_network(const std::string& node_file, const std::string& edge_file);

/// Rescales uniformly (aspect preserved) and translates so the bounding box
/// fits [0,1000]^2; edge weights are rescaled by the same factor. All-coincident
/// input degenerates to every node at (0,0).
RoadNetwork normalize(const RoadNetwork& net);

}  // namespace tgnn
