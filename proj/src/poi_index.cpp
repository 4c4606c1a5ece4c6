#include "tgnn/poi_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tgnn/errors.hpp"

namespace tgnn {

namespace {

// Splits [0, total) into `parts` contiguous chunks whose sizes differ by at
// most one; returns the chunk boundaries (parts + 1 entries).
std::vector<std::size_t> even_partition(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> bounds(parts + 1, 0);
  const std::size_t base = total / parts;
  const std::size_t extra = total % parts;
  for (std::size_t i = 0; i < parts; ++i) bounds[i + 1] = bounds[i] + base + (i < extra ? 1 : 0);
  return bounds;
}

Mbr box_of(std::span<const Poi> pois) {
  Mbr box = Mbr::of_point(pois.front().coord);
  for (const Poi& p : pois) box.expand(p.coord);
  return box;
}

}  // namespace

PoiIndex PoiIndex::build(std::vector<Poi> pois, int max_fanout) {
  if (max_fanout < 4) throw InvalidInput("max_fanout must be at least 4");

  std::unordered_set<std::int32_t> seen;
  for (const Poi& p : pois)
    if (!seen.insert(p.poi_id).second)
      throw InvalidInput("duplicate poi_id " + std::to_string(p.poi_id));

  PoiIndex index;
  if (pois.empty()) return index;

  const std::size_t n = pois.size();
  const std::size_t fanout = static_cast<std::size_t>(max_fanout);

  // Sort-tile-recursive packing: vertical slabs by x, leaves by y inside each
  // slab. Full-coordinate tie keys make the tree a pure function of the set.
  std::sort(pois.begin(), pois.end(), [](const Poi& a, const Poi& b) {
    if (a.coord.x != b.coord.x) return a.coord.x < b.coord.x;
    if (a.coord.y != b.coord.y) return a.coord.y < b.coord.y;
    return a.poi_id < b.poi_id;
  });

  const std::size_t leaf_count = (n + fanout - 1) / fanout;
  const std::size_t slabs =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(leaf_count))));
  const auto slab_bounds = even_partition(n, slabs);

  index.pois_.reserve(n);
  std::vector<Node> level;
  for (std::size_t s = 0; s < slabs; ++s) {
    const std::size_t lo = slab_bounds[s], hi = slab_bounds[s + 1];
    if (lo == hi) continue;
    std::sort(pois.begin() + lo, pois.begin() + hi, [](const Poi& a, const Poi& b) {
      if (a.coord.y != b.coord.y) return a.coord.y < b.coord.y;
      if (a.coord.x != b.coord.x) return a.coord.x < b.coord.x;
      return a.poi_id < b.poi_id;
    });
    const std::size_t slab_size = hi - lo;
    const std::size_t slab_leaves = (slab_size + fanout - 1) / fanout;
    const auto leaf_bounds = even_partition(slab_size, slab_leaves);
    for (std::size_t l = 0; l < slab_leaves; ++l) {
      Node leaf;
      leaf.leaf = true;
      leaf.first = static_cast<std::int32_t>(index.pois_.size());
      leaf.count = static_cast<std::int32_t>(leaf_bounds[l + 1] - leaf_bounds[l]);
      for (std::size_t i = lo + leaf_bounds[l]; i < lo + leaf_bounds[l + 1]; ++i)
        index.pois_.push_back(pois[i]);
      leaf.box = box_of(index.entries(leaf));
      level.push_back(leaf);
    }
  }

  // Pack upper levels by grouping consecutive nodes until one root remains.
  std::size_t level_first = 0;
  index.nodes_ = level;
  while (index.nodes_.size() - level_first > 1) {
    const std::size_t count = index.nodes_.size() - level_first;
    const std::size_t parents = (count + fanout - 1) / fanout;
    const auto bounds = even_partition(count, parents);
    const std::size_t next_first = index.nodes_.size();
    for (std::size_t p = 0; p < parents; ++p) {
      Node parent;
      parent.leaf = false;
      parent.first = static_cast<std::int32_t>(level_first + bounds[p]);
      parent.count = static_cast<std::int32_t>(bounds[p + 1] - bounds[p]);
      parent.box = index.nodes_[parent.first].box;
      for (std::int32_t c = 1; c < parent.count; ++c)
        parent.box.expand(index.nodes_[parent.first + c].box);
      index.nodes_.push_back(parent);
    }
    level_first = next_first;
  }
  return index;
}

NearestIterator::NearestIterator(const PoiIndex& index, const Coord& query)
    : index_(&index), query_(query) {
  if (const PoiIndex::Node* root = index.root()) {
    const std::int32_t root_index = static_cast<std::int32_t>(index.nodes_.size() - 1);
    queue_.push({mindist(root->box, query_), 0, root_index, root_index});
  }
}

std::optional<NearestIterator::Event> NearestIterator::next_event() {
  if (queue_.empty()) return std::nullopt;
  const QueueEntry entry = queue_.top();
  queue_.pop();
  last_key_ = entry.key;

  if (entry.kind == 1) return Event{entry.key, &index_->pois_[entry.index]};

  const PoiIndex::Node& node = index_->nodes_[entry.index];
  if (box_filter_ && !box_filter_(node.box))
    return Event{entry.key, nullptr};  // discarded subtree

  if (node.leaf) {
    for (std::int32_t i = 0; i < node.count; ++i) {
      const std::int32_t poi_index = node.first + i;
      const Poi& p = index_->pois_[poi_index];
      queue_.push({euclidean(query_, p.coord), 1, p.poi_id, poi_index});
    }
  } else {
    for (std::int32_t i = 0; i < node.count; ++i) {
      const std::int32_t child = node.first + i;
      queue_.push({mindist(index_->nodes_[child].box, query_), 0, child, child});
    }
  }
  return Event{entry.key, nullptr};
}

std::optional<std::pair<Poi, double>> NearestIterator::next_nearest() {
  while (auto event = next_event())
    if (event->poi) return std::make_pair(*event->poi, event->key);
  return std::nullopt;
}

}  // namespace tgnn
