#include "tgnn/distance_oracle.hpp"

#include <unordered_set>

namespace tgnn {

DistanceOracle::Sweep& DistanceOracle::sweep_for(NodeId source) {
  for (auto it = active_.begin(); it != active_.end(); ++it) {
    if (it->source == source) {
      active_.splice(active_.begin(), active_, it);  // bump to most recent
      return active_.front();
    }
  }
  if (active_.size() >= max_active_sweeps_) active_.pop_back();
  ++sweeps_started_;
  Sweep& sweep = active_.emplace_front();
  sweep.source = source;
  sweep.dist.assign(net_.node_count(), kInfiniteDistance);
  sweep.settled.assign(net_.node_count(), 0);
  sweep.dist[source] = 0.0;
  sweep.frontier.emplace(0.0, source);
  return sweep;
}

void DistanceOracle::run_until_settled(Sweep& sweep, std::span<const NodeId> pending) {
  std::unordered_set<NodeId> waiting;
  for (NodeId t : pending)
    if (!sweep.settled[t]) waiting.insert(t);

  while (!waiting.empty() && !sweep.frontier.empty()) {
    const auto [d, u] = sweep.frontier.top();
    sweep.frontier.pop();
    if (sweep.settled[u]) continue;  // stale entry
    sweep.settled[u] = 1;
    waiting.erase(u);
    for (const RoadNetwork::Edge& e : net_.neighbors(u)) {
      const double nd = d + e.weight;
      if (!sweep.settled[e.to] && nd < sweep.dist[e.to]) {
        sweep.dist[e.to] = nd;
        sweep.frontier.emplace(nd, e.to);
      }
    }
  }
  if (sweep.frontier.empty()) sweep.exhausted = true;
}

double DistanceOracle::shortest_distance(NodeId source, NodeId target) {
  const NodeId targets[1] = {target};
  return distances_to(source, targets)[0];
}

std::vector<double> DistanceOracle::distances_to(NodeId source, std::span<const NodeId> targets) {
  auto& fragment = fragments_[source];

  std::vector<NodeId> missing;
  for (NodeId t : targets)
    if (!fragment.contains(t)) missing.push_back(t);

  if (!missing.empty()) {
    Sweep& sweep = sweep_for(source);
    run_until_settled(sweep, missing);
    for (NodeId t : missing) fragment[t] = sweep.settled[t] ? sweep.dist[t] : kInfiniteDistance;
  }

  std::vector<double> out;
  out.reserve(targets.size());
  for (NodeId t : targets) out.push_back(fragment.at(t));
  return out;
}

void DistanceOracle::clear_cache() {
  active_.clear();
  fragments_.clear();
}

}  // namespace tgnn
