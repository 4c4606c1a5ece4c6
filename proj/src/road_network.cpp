#include "tgnn/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tgnn/errors.hpp"

namespace tgnn {

namespace {

// Tolerance absorbing rounding noise when comparing a weight against the
// endpoint Euclidean distance.
bool weight_below_euclidean(double w, double euclid) {
  return w + 1e-9 * std::max(1.0, euclid) < euclid;
}

}  // namespace

RoadNetwork RoadNetwork::build(std::vector<Coord> coords, std::span<const EdgeSpec> edges) {
  RoadNetwork net;
  const std::size_t n = coords.size();
  for (const Coord& c : coords) {
    if (!std::isfinite(c.x) || !std::isfinite(c.y))
      throw InvalidInput("node coordinate is not finite");
  }
  net.coords_ = std::move(coords);
  net.adjacency_.assign(n, {});

  // De-duplicate undirected edges keeping the minimum weight.
  std::map<std::pair<NodeId, NodeId>, double> weights;
  for (const EdgeSpec& e : edges) {
    if (e.u >= n || e.v >= n)
      throw InvalidInput("edge references unknown node " + std::to_string(std::max(e.u, e.v)));
    if (e.u == e.v) throw InvalidInput("self-loop on node " + std::to_string(e.u));
    const double euclid = euclidean(net.coords_[e.u], net.coords_[e.v]);
    const double w = e.weight.value_or(euclid);
    if (!(w > 0.0)) throw InvalidInput("non-positive edge weight on " + std::to_string(e.u) +
                                       "-" + std::to_string(e.v));
    if (weight_below_euclidean(w, euclid))
      throw InvalidInput("edge weight below endpoint Euclidean distance on " +
                         std::to_string(e.u) + "-" + std::to_string(e.v));
    const auto key = std::minmax(e.u, e.v);
    auto [it, inserted] = weights.emplace(std::pair<NodeId, NodeId>(key.first, key.second), w);
    if (!inserted) it->second = std::min(it->second, w);
  }

  for (const auto& [key, w] : weights) {
    net.adjacency_[key.first].push_back({key.second, w});
    net.adjacency_[key.second].push_back({key.first, w});
  }
  for (auto& adj : net.adjacency_)
    std::sort(adj.begin(), adj.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
  net.edge_count_ = weights.size();
  return net;
}

Mbr RoadNetwork::bounding_box() const {
  if (coords_.empty()) return {};
  Mbr box = Mbr::of_point(coords_.front());
  for (const Coord& c : coords_) box.expand(c);
  return box;
}

namespace {

struct NodeLine {
  long long id;
  Coord coord;
};

// Strips comments and whitespace-only lines; returns false for skippable lines.
bool strip_line(std::string& line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return line.find_first_not_of(" \t\r\n") != std::string::npos;
}

}  // namespace

RoadNetwork load_network(const std::string& node_file, const std::string& edge_file) {
  std::ifstream nodes_in(node_file);
  if (!nodes_in) throw ParseError(node_file, 0, "cannot open file");

  std::vector<NodeLine> raw_nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(nodes_in, line)) {
    ++line_no;
    if (!strip_line(line)) continue;
    std::istringstream in(line);
    NodeLine n{};
    if (!(in >> n.id >> n.coord.x >> n.coord.y))
      throw ParseError(node_file, line_no, "expected '<id> <x> <y>'");
    std::string extra;
    if (in >> extra) throw ParseError(node_file, line_no, "trailing tokens after coordinates");
    if (n.id < 0) throw ParseError(node_file, line_no, "negative node id");
    raw_nodes.push_back(n);
  }
  if (raw_nodes.empty()) throw ParseError(node_file, 0, "no nodes");

  // Remap non-contiguous ids to 0..n-1 preserving file order.
  std::unordered_map<long long, NodeId> id_map;
  id_map.reserve(raw_nodes.size());
  std::vector<Coord> coords;
  coords.reserve(raw_nodes.size());
  bool contiguous = true;
  for (const NodeLine& n : raw_nodes) {
    if (!id_map.emplace(n.id, static_cast<NodeId>(coords.size())).second)
      throw ParseError(node_file, 0, "duplicate node id " + std::to_string(n.id));
    if (n.id != static_cast<long long>(coords.size())) contiguous = false;
    coords.push_back(n.coord);
  }
  if (!contiguous) {
    std::ofstream remap(node_file + ".remap");
    remap << "# original_id new_id\n";
    for (const NodeLine& n : raw_nodes) remap << n.id << ' ' << id_map.at(n.id) << '\n';
  }

  std::ifstream edges_in(edge_file);
  if (!edges_in) throw ParseError(edge_file, 0, "cannot open file");

  std::vector<RoadNetwork::EdgeSpec> edges;
  line_no = 0;
  while (std::getline(edges_in, line)) {
    ++line_no;
    if (!strip_line(line)) continue;
    std::istringstream in(line);
    long long u, v;
    if (!(in >> u >> v)) throw ParseError(edge_file, line_no, "expected '<u> <v> [w]'");
    RoadNetwork::EdgeSpec e;
    double w;
    if (in >> w) {
      if (!(w > 0.0)) throw ParseError(edge_file, line_no, "non-positive edge weight");
      e.weight = w;
      std::string extra;
      if (in >> extra) throw ParseError(edge_file, line_no, "trailing tokens after weight");
    }
    const auto u_it = id_map.find(u);
    const auto v_it = id_map.find(v);
    if (u_it == id_map.end() || v_it == id_map.end())
      throw ParseError(edge_file, line_no,
                       "edge references unknown node " + std::to_string(u_it == id_map.end() ? u : v));
    if (u == v) throw ParseError(edge_file, line_no, "self-loop");
    e.u = u_it->second;
    e.v = v_it->second;
    edges.push_back(e);
  }

  try {
    return RoadNetwork::build(std::move(coords), edges);
  } catch (const InvalidInput& e) {
    throw ParseError(edge_file, 0, e.what());
  }
}

RoadNetwork normalize(const RoadNetwork& net) {
  if (net.node_count() == 0) throw InvalidInput("cannot normalize an empty network");
  const Mbr box = net.bounding_box();
  const double extent = std::max(box.max.x - box.min.x, box.max.y - box.min.y);
  const double scale = extent > 0.0 ? 1000.0 / extent : 1.0;

  RoadNetwork out;
  out.coords_.reserve(net.node_count());
  for (const Coord& c : net.coords_)
    out.coords_.push_back({(c.x - box.min.x) * scale, (c.y - box.min.y) * scale});
  out.adjacency_ = net.adjacency_;
  for (auto& adj : out.adjacency_)
    for (RoadNetwork::Edge& e : adj) e.weight *= scale;
  out.edge_count_ = net.edge_count_;
  return out;
}

}  // namespace tgnn
