#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "tgnn/solver.hpp"

namespace tgnn {

/// One consecutive source-destination leg chosen per user (1-based indices).
struct Combination {
  std::vector<std::int32_t> leg;  // leg[i] in [1, m_i - 1]
};

/// Enumerates all product(m_i - 1) combinations exactly once, lexicographic
/// by (user order, leg index).
class CombinationEnumerator {
 public:
  explicit CombinationEnumerator(const QueryGroup& group);

  std::optional<Combination> next();

  static std::uint64_t count(const QueryGroup& group);

 private:
  std::vector<std::int32_t> leg_counts_;
  std::vector<std::int32_t> current_;
  bool done_ = false;
};

/// Brute-force reference: evaluates every POI for every user and returns the
/// minimum-total-overhead solution under the shared tie-break (distance to the
/// global centroid, then poi_id). Throws InvalidInput on an empty POI list.
Solution exhaustive(const QueryGroup& group, std::span<const Poi> pois, DistanceOracle& oracle,
                    double tie_tolerance = 1e-9);

struct BaselineReport {
  Solution solution;
  std::uint64_t combinations = 0;
  std::uint64_t pois_evaluated = 0;  // one per (combination, POI) pair
  double elapsed_seconds = 0.0;
};

/// Combination-enumeration baseline: for every combination of one leg per
/// user, scans all POIs for the one minimizing the summed leg overhead, then
/// keeps the best across combinations. The per-combination subproblem is an
/// exhaustive scan (distances memoized across combinations through the
/// oracle), so results match `exhaustive` while the evaluation counter grows
/// with the combination count.
BaselineReport ba_tgnn(const QueryGroup& group, std::span<const Poi> pois, DistanceOracle& oracle,
                       double tie_tolerance = 1e-9);

}  // namespace tgnn
