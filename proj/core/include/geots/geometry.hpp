#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace geots {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) = default;
};

/// Euclidean distance between two planar locations.
inline double spatial_distance(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned minimum bounding rectangle. A default-constructed Mbr is
/// empty (lo > hi) and expands to whatever it is first fed.
struct Mbr {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  friend bool operator==(const Mbr& a, const Mbr& b) = default;

  bool empty() const { return lo.x > hi.x || lo.y > hi.y; }

  void expand(Point p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }

  void expand(const Mbr& o) {
    lo.x = std::min(lo.x, o.lo.x);
    lo.y = std::min(lo.y, o.lo.y);
    hi.x = std::max(hi.x, o.hi.x);
    hi.y = std::max(hi.y, o.hi.y);
  }

  bool contains(Point p) const {
    return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
  }

  bool contains(const Mbr& o) const {
    return lo.x <= o.lo.x && o.hi.x <= hi.x && lo.y <= o.lo.y && o.hi.y <= hi.y;
  }

  double area() const {
    return empty() ? 0.0 : (hi.x - lo.x) * (hi.y - lo.y);
  }

  double diagonal() const {
    return empty() ? 0.0 : std::hypot(hi.x - lo.x, hi.y - lo.y);
  }
};

inline Mbr mbr_union(const Mbr& a, const Mbr& b) {
  Mbr u = a;
  u.expand(b);
  return u;
}

/// Area growth needed for `base` to cover `add`; the quadratic-split and
/// subtree-choice heuristics rank candidates with this.
inline double enlargement(const Mbr& base, const Mbr& add) {
  return mbr_union(base, add).area() - base.area();
}

/// Distance from a point to the nearest point of a rectangle (0 inside).
/// Lower-bounds the distance to anything contained in the rectangle.
inline double mindist_sp(Point q, const Mbr& r) {
  const double dx = std::max({r.lo.x - q.x, 0.0, q.x - r.hi.x});
  const double dy = std::max({r.lo.y - q.y, 0.0, q.y - r.hi.y});
  return std::hypot(dx, dy);
}

}  // namespace geots
