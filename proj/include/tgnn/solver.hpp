#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tgnn/distance_oracle.hpp"
#include "tgnn/poi_index.hpp"
#include "tgnn/trip.hpp"

namespace tgnn {

/// Per-user quantities fixed by the trip alone.
struct TripStats {
  Coord centroid{};                    // geometric centroid of the trip locations
  double trip_distance = 0.0;          // sum of consecutive-leg road distances
  double max_leg_distance = 0.0;       // largest single leg (road distance)
  double max_centroid_distance = 0.0;  // largest Euclidean distance centroid -> location
};

/// Circle around the retrieval origin covering everything dequeued so far.
struct KnownArea {
  Coord center{};
  double radius = 0.0;
};

/// The three families of per-user circles restricting where a better meetup
/// POI can still be. s1 and s2 are unions; s3 is an intersection. Radii stay
/// +infinity until a first solution exists (or while a technique is disabled).
struct SearchAreas {
  std::vector<Circle> s1;
  std::vector<Circle> s2;
  std::vector<Circle> s3;
};

struct UserDetour {
  std::int32_t user_id = 0;
  std::int32_t detour_index = 0;  // 1-based leg index: user leaves at locations[detour_index-1]
  NodeId detour_node = kInvalidNode;
  double overhead = 0.0;
};

struct Solution {
  bool feasible = false;
  Poi meetup{};
  double total_overhead = kInfiniteDistance;
  std::vector<UserDetour> detours;  // one per user, group order
};

struct SolverConfig {
  bool enable_pt1 = true;
  bool enable_pt2 = true;
  bool enable_pt3 = true;
  bool prune_internal_nodes = false;  // off by default; POIs are pruned either way
  bool record_diagnostics = false;    // fill rejected/undequeued poi id lists
  double tie_tolerance = 1e-9;
  // Verification-harness knob scaling the first pruning radius; anything
  // except 1.0 makes the pruning unsound on purpose so mismatch detection
  // can be exercised. Leave at 1.0.
  double debug_pt1_radius_scale = 1.0;
};

struct SolverReport {
  Solution solution;
  std::uint64_t pois_dequeued = 0;
  std::uint64_t pois_evaluated = 0;  // passed the candidate test, overhead computed
  std::uint64_t dijkstra_runs = 0;
  double elapsed_seconds = 0.0;
  bool terminated_by_coverage = false;
  // Filled only with SolverConfig::record_diagnostics.
  std::vector<std::int32_t> rejected_poi_ids;
  std::vector<std::int32_t> undequeued_poi_ids;
};

/// Precomputed query state shared by the solver and the reference solvers.
struct QueryContext {
  std::vector<TripStats> stats;  // per user, group order
  Coord global_centroid{};
  SearchAreas areas;   // radii start at +infinity
  KnownArea known;     // radius starts at 0
  std::vector<std::vector<double>> leg_distances;        // per user, size m_i - 1
  std::vector<NodeId> unique_locations;                  // all trip locations, deduplicated
  std::vector<std::vector<std::size_t>> location_slot;   // per user/position -> unique_locations index
};

/// Computes centroids, per-leg road distances, trip stats, and the initial
/// (unbounded) search areas. Throws InfeasibleQuery when a trip leg is
/// disconnected, InvalidInput when the group is structurally invalid.
QueryContext initialize(const QueryGroup& group, DistanceOracle& oracle);

struct OverheadResult {
  double overhead = kInfiniteDistance;
  std::int32_t detour_index = 0;  // 1-based; smallest leg attaining the minimum
};

/// Minimum extra distance for one user to divert via the POI between two
/// consecutive trip locations. `location_to_poi[j]` is the road distance from
/// locations[j] to the POI; `leg_distances[j]` between locations[j] and [j+1].
/// Negative float dust is clamped to zero.
OverheadResult compute_trip_overhead(std::span<const double> leg_distances,
                                     std::span<const double> location_to_poi,
                                     double tie_tolerance = 1e-9);

/// Convenience form that fetches the distances itself.
OverheadResult compute_trip_overhead(const Poi& poi, const Trip& trip, DistanceOracle& oracle,
                                     double tie_tolerance = 1e-9);

double pt1_radius(const TripStats& stats, std::size_t group_size, double total_overhead_best);
double pt2_radius(const TripStats& stats, double user_overhead_best);
double pt3_radius(const TripStats& stats, double total_overhead_best);

/// Tightens the enabled areas from a strictly improved best solution.
/// Centers never change; disabled techniques keep infinite radii.
void update_search_areas(SearchAreas& areas, std::span<const TripStats> stats,
                         const Solution& best, const SolverConfig& config);

/// True iff the point is inside at least one s1 circle AND at least one s2
/// circle AND all s3 circles. Infinite radii pass automatically, so the test
/// is vacuously true before the first solution or for disabled techniques.
bool is_candidate(const Coord& p, const SearchAreas& areas);

/// Box variant used for optional internal-node pruning: true iff some point
/// of the box could still pass is_candidate.
bool box_may_contain_candidate(const Mbr& box, const SearchAreas& areas);

/// Sound sufficient condition for the known area to cover the intersection of
/// the three search areas: all s1 circles strictly inside the known circle,
/// or all s2 circles, or at least one s3 circle. Infinite radii never certify.
bool known_covers_search(const KnownArea& known, const SearchAreas& areas);

/// Canonical preference shared by every solver in this project: a candidate
/// replaces the incumbent when its total overhead is smaller beyond the
/// tolerance; within the tolerance the POI closer to the global centroid wins,
/// then the smaller poi_id.
bool better_solution(double candidate_total, const Poi& candidate, double best_total,
                     const Poi& best, const Coord& global_centroid, double tie_tolerance);

/// Incremental-retrieval solver: dequeues index entries by distance from the
/// global centroid, evaluates candidate POIs, tightens the search areas on
/// every improvement, and stops once the known area covers the remaining
/// search area (or the queue drains). Returns the group-optimal solution.
SolverReport solve(const QueryGroup& group, const PoiIndex& index, DistanceOracle& oracle,
                   const SolverConfig& config = {});

}  // namespace tgnn
