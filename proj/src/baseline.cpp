#include "tgnn/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "tgnn/errors.hpp"

namespace tgnn {

CombinationEnumerator::CombinationEnumerator(const QueryGroup& group) {
  for (const Trip& trip : group.trips) {
    leg_counts_.push_back(static_cast<std::int32_t>(trip.leg_count()));
    current_.push_back(1);
  }
  done_ = group.trips.empty();
}

std::optional<Combination> CombinationEnumerator::next() {
  if (done_) return std::nullopt;
  Combination out{current_};
  // odometer increment, last user fastest
  for (std::size_t i = current_.size(); i-- > 0;) {
    if (current_[i] < leg_counts_[i]) {
      ++current_[i];
      return out;
    }
    current_[i] = 1;
  }
  done_ = true;
  return out;
}

std::uint64_t CombinationEnumerator::count(const QueryGroup& group) {
  std::uint64_t product = 1;
  for (const Trip& trip : group.trips) product *= static_cast<std::uint64_t>(trip.leg_count());
  return product;
}

namespace {

// POIs ordered the way the solver dequeues them: distance from the global
// centroid, then poi_id.
std::vector<std::size_t> retrieval_order(std::span<const Poi> pois, const Coord& centroid) {
  std::vector<std::size_t> order(pois.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = euclidean(centroid, pois[a].coord);
    const double db = euclidean(centroid, pois[b].coord);
    if (da != db) return da < db;
    return pois[a].poi_id < pois[b].poi_id;
  });
  return order;
}

// Per-POI distances to every unique trip location, fetched once per POI.
std::vector<std::vector<double>> poi_location_tables(const QueryContext& ctx,
                                                     std::span<const Poi> pois,
                                                     DistanceOracle& oracle) {
  std::vector<std::vector<double>> tables(pois.size());
  for (std::size_t k = 0; k < pois.size(); ++k)
    tables[k] = oracle.distances_to(pois[k].node, ctx.unique_locations);
  return tables;
}

}  // namespace

Solution exhaustive(const QueryGroup& group, std::span<const Poi> pois, DistanceOracle& oracle,
                    double tie_tolerance) {
  if (pois.empty()) throw InvalidInput("exhaustive: empty POI list");
  QueryContext ctx = initialize(group, oracle);
  const std::size_t n = group.size();

  Solution best;
  std::vector<double> user_to_poi;
  for (std::size_t k : retrieval_order(pois, ctx.global_centroid)) {
    const Poi& poi = pois[k];
    const std::vector<double> to_poi = oracle.distances_to(poi.node, ctx.unique_locations);

    double total = 0.0;
    std::vector<UserDetour> detours(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Trip& trip = group.trips[i];
      user_to_poi.clear();
      for (std::size_t slot : ctx.location_slot[i]) user_to_poi.push_back(to_poi[slot]);
      const OverheadResult r =
          compute_trip_overhead(ctx.leg_distances[i], user_to_poi, tie_tolerance);
      total += r.overhead;
      detours[i] = {trip.user_id, r.detour_index,
                    trip.locations[static_cast<std::size_t>(r.detour_index - 1)], r.overhead};
    }

    if (better_solution(total, poi, best.total_overhead, best.meetup, ctx.global_centroid,
                        tie_tolerance)) {
      best.feasible = true;
      best.meetup = poi;
      best.total_overhead = total;
      best.detours = std::move(detours);
    }
  }
  return best;
}

BaselineReport ba_tgnn(const QueryGroup& group, std::span<const Poi> pois, DistanceOracle& oracle,
                       double tie_tolerance) {
  const auto started = std::chrono::steady_clock::now();
  if (pois.empty()) throw InvalidInput("ba_tgnn: empty POI list");
  QueryContext ctx = initialize(group, oracle);
  const std::size_t n = group.size();

  BaselineReport report;
  const auto tables = poi_location_tables(ctx, pois, oracle);
  const auto order = retrieval_order(pois, ctx.global_centroid);

  Solution best;
  Combination best_combination;

  CombinationEnumerator combinations(group);
  while (auto combination = combinations.next()) {
    ++report.combinations;
    for (std::size_t k : order) {
      const Poi& poi = pois[k];
      ++report.pois_evaluated;

      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t leg = static_cast<std::size_t>(combination->leg[i] - 1);
        const double ds = tables[k][ctx.location_slot[i][leg]];
        const double dt = tables[k][ctx.location_slot[i][leg + 1]];
        total += std::max(0.0, ds + dt - ctx.leg_distances[i][leg]);
      }

      if (better_solution(total, poi, best.total_overhead, best.meetup, ctx.global_centroid,
                          tie_tolerance)) {
        best.feasible = true;
        best.meetup = poi;
        best.total_overhead = total;
        best_combination = *combination;
      }
    }
  }

  // Detour locations are the winning combination's source locations.
  if (best.feasible) {
    best.detours.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Trip& trip = group.trips[i];
      const std::size_t leg = static_cast<std::size_t>(best_combination.leg[i] - 1);
      const std::size_t k = static_cast<std::size_t>(
          std::find_if(pois.begin(), pois.end(),
                       [&](const Poi& p) { return p.poi_id == best.meetup.poi_id; }) -
          pois.begin());
      const double ds = tables[k][ctx.location_slot[i][leg]];
      const double dt = tables[k][ctx.location_slot[i][leg + 1]];
      best.detours[i] = {trip.user_id, best_combination.leg[i], trip.locations[leg],
                         std::max(0.0, ds + dt - ctx.leg_distances[i][leg])};
    }
  }

  report.solution = std::move(best);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace tgnn
