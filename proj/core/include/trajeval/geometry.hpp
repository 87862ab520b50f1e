#pragma once

#include <cmath>

namespace trajeval {

/// Planar position in a projected metric CRS (meters).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace trajeval
