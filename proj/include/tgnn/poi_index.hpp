#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "tgnn/geometry.hpp"
#include "tgnn/road_network.hpp"

namespace tgnn {

/// A point of interest sitting on a network node. `coord` duplicates the
/// node's coordinate so index queries never touch the graph.
struct Poi {
  std::int32_t poi_id = -1;
  NodeId node = kInvalidNode;
  Coord coord{};
};

/// Packed R-tree over POIs, bulk-loaded with a sort-tile-recursive pass so
/// the tree shape is deterministic for a given POI set.
class PoiIndex {
 public:
  struct Node {
    Mbr box{};
    std::int32_t first = 0;  // index of first child node, or first POI for leaves
    std::int32_t count = 0;
    bool leaf = true;
  };

  PoiIndex() = default;

  /// Throws InvalidInput on duplicate poi_ids or max_fanout < 4.
  static PoiIndex build(std::vector<Poi> pois, int max_fanout = 16);

  bool empty() const { return pois_.empty(); }
  std::size_t size() const { return pois_.size(); }
  std::span<const Poi> pois() const { return pois_; }

  const Node* root() const { return nodes_.empty() ? nullptr : &nodes_.back(); }
  std::span<const Node> children(const Node& n) const {
    return {nodes_.data() + n.first, static_cast<std::size_t>(n.count)};
  }
  std::span<const Poi> entries(const Node& n) const {
    return {pois_.data() + n.first, static_cast<std::size_t>(n.count)};
  }

 private:
  friend class NearestIterator;

  std::vector<Poi> pois_;   // leaf order
  std::vector<Node> nodes_; // levels bottom-up, root last
};

/// Best-first incremental nearest-neighbor scan from a fixed query point.
/// POIs come out in non-decreasing order of Euclidean distance from the query
/// point, ties broken by ascending poi_id. Dequeued keys never decrease, and
/// every POI not yet yielded lies at distance >= the last dequeued key.
class NearestIterator {
 public:
  /// One dequeued priority-queue entry; `poi` is null for internal nodes.
  struct Event {
    double key = 0.0;
    const Poi* poi = nullptr;
  };

  NearestIterator(const PoiIndex& index, const Coord& query);

  /// Internal nodes whose box fails `keep` are discarded instead of expanded.
  void set_box_filter(std::function<bool(const Mbr&)> keep) { box_filter_ = std::move(keep); }

  /// Next dequeued entry (internal node or POI); nullopt when exhausted.
  std::optional<Event> next_event();

  /// Next POI in order, skipping internal-node events.
  std::optional<std::pair<Poi, double>> next_nearest();

  double last_key() const { return last_key_; }

 private:
  struct QueueEntry {
    double key = 0.0;
    int kind = 0;           // 0 = tree node, 1 = POI; nodes expand before equal-key POIs
    std::int32_t tie = 0;   // poi_id for POIs, node index for tree nodes
    std::int32_t index = 0; // into nodes_ or pois_

    bool operator>(const QueueEntry& o) const {
      if (key != o.key) return key > o.key;
      if (kind != o.kind) return kind > o.kind;
      return tie > o.tie;
    }
  };

  const PoiIndex* index_;
  Coord query_;
  std::function<bool(const Mbr&)> box_filter_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue_;
  double last_key_ = 0.0;
};

}  // namespace tgnn
