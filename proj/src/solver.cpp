#include "tgnn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "tgnn/errors.hpp"

namespace tgnn {

void validate(const QueryGroup& group, const RoadNetwork& net) {
  if (group.trips.empty()) throw InvalidInput("query group has no trips");
  std::vector<std::int32_t> ids;
  for (const Trip& trip : group.trips) {
    ids.push_back(trip.user_id);
    if (trip.locations.size() < 2)
      throw InvalidInput("trip of user " + std::to_string(trip.user_id) +
                         " has fewer than 2 locations");
    for (NodeId loc : trip.locations)
      if (loc >= net.node_count())
        throw InvalidInput("trip of user " + std::to_string(trip.user_id) +
                           " references unknown node " + std::to_string(loc));
    for (std::size_t j = 0; j + 1 < trip.locations.size(); ++j)
      if (trip.locations[j] == trip.locations[j + 1])
        throw InvalidInput("trip of user " + std::to_string(trip.user_id) +
                           " repeats a location consecutively");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw InvalidInput("duplicate user ids in group");
}

QueryContext initialize(const QueryGroup& group, DistanceOracle& oracle) {
  const RoadNetwork& net = oracle.network();
  validate(group, net);

  QueryContext ctx;
  const std::size_t n = group.size();
  ctx.stats.resize(n);
  ctx.leg_distances.resize(n);
  ctx.location_slot.resize(n);

  std::unordered_map<NodeId, std::size_t> slot_of;
  for (std::size_t i = 0; i < n; ++i) {
    const Trip& trip = group.trips[i];
    for (std::size_t j = 0; j < trip.locations.size(); ++j) {
      const auto [it, inserted] = slot_of.emplace(trip.locations[j], ctx.unique_locations.size());
      if (inserted) ctx.unique_locations.push_back(trip.locations[j]);
      ctx.location_slot[i].push_back(it->second);
    }
  }

  Coord centroid_sum{};
  for (std::size_t i = 0; i < n; ++i) {
    const Trip& trip = group.trips[i];
    TripStats& stats = ctx.stats[i];
    const std::size_t m = trip.locations.size();

    Coord sum{};
    for (NodeId loc : trip.locations) {
      sum.x += net.coord(loc).x;
      sum.y += net.coord(loc).y;
    }
    stats.centroid = {sum.x / static_cast<double>(m), sum.y / static_cast<double>(m)};

    ctx.leg_distances[i].reserve(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const double d = oracle.shortest_distance(trip.locations[j], trip.locations[j + 1]);
      if (!std::isfinite(d))
        throw InfeasibleQuery(trip.user_id, static_cast<std::int32_t>(j + 1),
                              "trip of user " + std::to_string(trip.user_id) +
                                  " is disconnected at leg " + std::to_string(j + 1));
      ctx.leg_distances[i].push_back(d);
      stats.trip_distance += d;
      stats.max_leg_distance = std::max(stats.max_leg_distance, d);
    }
    for (NodeId loc : trip.locations)
      stats.max_centroid_distance =
          std::max(stats.max_centroid_distance, euclidean(net.coord(loc), stats.centroid));

    centroid_sum.x += stats.centroid.x;
    centroid_sum.y += stats.centroid.y;
  }
  ctx.global_centroid = {centroid_sum.x / static_cast<double>(n),
                         centroid_sum.y / static_cast<double>(n)};

  ctx.areas.s1.resize(n);
  ctx.areas.s2.resize(n);
  ctx.areas.s3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ctx.areas.s1[i] = {ctx.stats[i].centroid, kInfiniteDistance};
    ctx.areas.s2[i] = {ctx.stats[i].centroid, kInfiniteDistance};
    ctx.areas.s3[i] = {ctx.stats[i].centroid, kInfiniteDistance};
  }
  ctx.known = {ctx.global_centroid, 0.0};
  return ctx;
}

OverheadResult compute_trip_overhead(std::span<const double> leg_distances,
                                     std::span<const double> location_to_poi,
                                     double tie_tolerance) {
  const std::size_t legs = leg_distances.size();
  double minimum = kInfiniteDistance;
  for (std::size_t j = 0; j < legs; ++j) {
    if (!std::isfinite(leg_distances[j])) continue;
    const double od =
        std::max(0.0, location_to_poi[j] + location_to_poi[j + 1] - leg_distances[j]);
    minimum = std::min(minimum, od);
  }
  for (std::size_t j = 0; j < legs; ++j) {
    if (!std::isfinite(leg_distances[j])) continue;
    const double od =
        std::max(0.0, location_to_poi[j] + location_to_poi[j + 1] - leg_distances[j]);
    if (od <= minimum + tie_tolerance)
      return {minimum, static_cast<std::int32_t>(j + 1)};
  }
  return {kInfiniteDistance, 1};  // every leg unusable (unreachable POI)
}

OverheadResult compute_trip_overhead(const Poi& poi, const Trip& trip, DistanceOracle& oracle,
                                     double tie_tolerance) {
  std::vector<double> legs;
  legs.reserve(trip.leg_count());
  for (std::size_t j = 0; j + 1 < trip.locations.size(); ++j)
    legs.push_back(oracle.shortest_distance(trip.locations[j], trip.locations[j + 1]));
  const std::vector<double> to_poi = oracle.distances_to(poi.node, trip.locations);
  return compute_trip_overhead(legs, to_poi, tie_tolerance);
}

double pt1_radius(const TripStats& stats, std::size_t group_size, double total_overhead_best) {
  return total_overhead_best / (2.0 * static_cast<double>(group_size)) +
         stats.max_leg_distance / 2.0 + stats.max_centroid_distance;
}

double pt2_radius(const TripStats& stats, double user_overhead_best) {
  return user_overhead_best / 2.0 + stats.max_leg_distance / 2.0 + stats.max_centroid_distance;
}

double pt3_radius(const TripStats& stats, double total_overhead_best) {
  return total_overhead_best + stats.trip_distance;
}

void update_search_areas(SearchAreas& areas, std::span<const TripStats> stats,
                         const Solution& best, const SolverConfig& config) {
  const std::size_t n = stats.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (config.enable_pt1)
      areas.s1[i].radius =
          pt1_radius(stats[i], n, best.total_overhead) * config.debug_pt1_radius_scale;
    if (config.enable_pt2)
      areas.s2[i].radius = pt2_radius(stats[i], best.detours[i].overhead);
    if (config.enable_pt3) areas.s3[i].radius = pt3_radius(stats[i], best.total_overhead);
  }
}

bool is_candidate(const Coord& p, const SearchAreas& areas) {
  const auto inside = [&p](const Circle& c) { return contains(c, p); };
  return std::any_of(areas.s1.begin(), areas.s1.end(), inside) &&
         std::any_of(areas.s2.begin(), areas.s2.end(), inside) &&
         std::all_of(areas.s3.begin(), areas.s3.end(), inside);
}

bool box_may_contain_candidate(const Mbr& box, const SearchAreas& areas) {
  const auto reaches = [&box](const Circle& c) { return mindist(box, c.center) <= c.radius; };
  return std::any_of(areas.s1.begin(), areas.s1.end(), reaches) &&
         std::any_of(areas.s2.begin(), areas.s2.end(), reaches) &&
         std::all_of(areas.s3.begin(), areas.s3.end(), reaches);
}

namespace {

// Circle strictly inside the known circle; strictness closes the tangency tie
// where a boundary POI could still sit in the queue at key == radius.
bool strictly_inside(const KnownArea& known, const Circle& c) {
  return std::isfinite(c.radius) &&
         euclidean(known.center, c.center) + c.radius < known.radius;
}

}  // namespace

bool known_covers_search(const KnownArea& known, const SearchAreas& areas) {
  const auto inside = [&known](const Circle& c) { return strictly_inside(known, c); };
  if (!areas.s1.empty() && std::all_of(areas.s1.begin(), areas.s1.end(), inside)) return true;
  if (!areas.s2.empty() && std::all_of(areas.s2.begin(), areas.s2.end(), inside)) return true;
  return std::any_of(areas.s3.begin(), areas.s3.end(), inside);
}

bool better_solution(double candidate_total, const Poi& candidate, double best_total,
                     const Poi& best, const Coord& global_centroid, double tie_tolerance) {
  if (!std::isfinite(candidate_total)) return false;
  if (!std::isfinite(best_total)) return true;
  if (candidate_total < best_total - tie_tolerance) return true;
  if (candidate_total > best_total + tie_tolerance) return false;
  const double dc = euclidean(global_centroid, candidate.coord);
  const double db = euclidean(global_centroid, best.coord);
  if (dc != db) return dc < db;
  return candidate.poi_id < best.poi_id;
}

SolverReport solve(const QueryGroup& group, const PoiIndex& index, DistanceOracle& oracle,
                   const SolverConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (index.empty()) throw InvalidInput("POI index is empty");

  const std::uint64_t sweeps_before = oracle.sweeps_started();
  QueryContext ctx = initialize(group, oracle);
  const std::size_t n = group.size();

  SolverReport report;
  Solution best;

  NearestIterator iterator(index, ctx.known.center);
  if (config.prune_internal_nodes)
    iterator.set_box_filter(
        [&ctx](const Mbr& box) { return box_may_contain_candidate(box, ctx.areas); });

  std::vector<double> user_to_poi;
  while (auto event = iterator.next_event()) {
    ctx.known.radius = event->key;

    if (event->poi) {
      const Poi& poi = *event->poi;
      ++report.pois_dequeued;
      if (is_candidate(poi.coord, ctx.areas)) {
        ++report.pois_evaluated;
        const std::vector<double> to_poi = oracle.distances_to(poi.node, ctx.unique_locations);

        double total = 0.0;
        std::vector<UserDetour> detours(n);
        for (std::size_t i = 0; i < n; ++i) {
          const Trip& trip = group.trips[i];
          user_to_poi.clear();
          for (std::size_t slot : ctx.location_slot[i]) user_to_poi.push_back(to_poi[slot]);
          const OverheadResult r =
              compute_trip_overhead(ctx.leg_distances[i], user_to_poi, config.tie_tolerance);
          total += r.overhead;
          detours[i] = {trip.user_id, r.detour_index,
                        trip.locations[static_cast<std::size_t>(r.detour_index - 1)], r.overhead};
        }

        if (better_solution(total, poi, best.total_overhead, best.meetup, ctx.global_centroid,
                            config.tie_tolerance)) {
          best.feasible = true;
          best.meetup = poi;
          best.total_overhead = total;
          best.detours = std::move(detours);
          update_search_areas(ctx.areas, ctx.stats, best, config);
        }
      } else if (config.record_diagnostics) {
        report.rejected_poi_ids.push_back(poi.poi_id);
      }
    }

    if (known_covers_search(ctx.known, ctx.areas)) {
      report.terminated_by_coverage = true;
      break;
    }
  }

  if (report.terminated_by_coverage && config.record_diagnostics) {
    while (auto event = iterator.next_event())
      if (event->poi) report.undequeued_poi_ids.push_back(event->poi->poi_id);
  }

  report.solution = std::move(best);
  report.dijkstra_runs = oracle.sweeps_started() - sweeps_before;
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace tgnn
