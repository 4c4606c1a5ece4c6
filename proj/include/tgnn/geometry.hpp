#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace tgnn {

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

struct Coord {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Coord& a, const Coord& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Coord& a, const Coord& b) { return !(a == b); }

inline double euclidean(const Coord& a, const Coord& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Circle with a possibly infinite radius (infinite = unrestricted).
struct Circle {
  Coord center{};
  double radius = kInfiniteDistance;
};

inline bool contains(const Circle& c, const Coord& p) {
  return euclidean(c.center, p) <= c.radius;
}

/// Axis-aligned rectangle. Degenerates to a point when min == max.
struct Mbr {
  Coord min{};
  Coord max{};

  bool contains(const Coord& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }

  void expand(const Coord& p) {
    min.x = std::min(min.x, p.x);
    min.y = std::min(min.y, p.y);
    max.x = std::max(max.x, p.x);
    max.y = std::max(max.y, p.y);
  }

  void expand(const Mbr& o) {
    expand(o.min);
    expand(o.max);
  }

  static Mbr of_point(const Coord& p) { return Mbr{p, p}; }
};

/// Minimum Euclidean distance from q to any point of the box; 0 when inside.
/// Lower-bounds euclidean(q, p) for every p contained in the box.
inline double mindist(const Mbr& box, const Coord& q) {
  const double dx = std::max({box.min.x - q.x, 0.0, q.x - box.max.x});
  const double dy = std::max({box.min.y - q.y, 0.0, q.y - box.max.y});
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace tgnn
