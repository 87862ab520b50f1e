#include "trajeval/measures/trajectory_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "trajeval/error.hpp"

namespace trajeval::measures {

namespace {

void require_non_empty(std::span<const Point2> a, std::span<const Point2> b) {
  if (a.empty() || b.empty()) throw Error("distance between empty point sequences");
}

double directed_hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      nearest = std::min(nearest, distance(p, q));
      if (nearest <= worst) break;
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace

double hausdorff(std::span<const Point2> a, std::span<const Point2> b) {
  require_non_empty(a, b);
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double discrete_frechet(std::span<const Point2> a, std::span<const Point2> b) {
  require_non_empty(a, b);
  const std::size_t m = b.size();
  std::vector<double> prev(m), curr(m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(a[i], b[j]);
      double reach;
      if (i == 0 && j == 0) {
        reach = d;
      } else if (i == 0) {
        reach = std::max(curr[j - 1], d);
      } else if (j == 0) {
        reach = std::max(prev[0], d);
      } else {
        reach = std::max(std::min({prev[j], prev[j - 1], curr[j - 1]}), d);
      }
      curr[j] = reach;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

double dtw(std::span<const Point2> a, std::span<const Point2> b) {
  require_non_empty(a, b);
  const std::size_t m = b.size();
  std::vector<double> prev(m), curr(m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(a[i], b[j]);
      if (i == 0 && j == 0) {
        curr[j] = d;
      } else if (i == 0) {
        curr[j] = curr[j - 1] + d;
      } else if (j == 0) {
        curr[j] = prev[0] + d;
      } else {
        curr[j] = std::min({prev[j], prev[j - 1], curr[j - 1]}) + d;
      }
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

double cosine_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("cosine distance of vectors with different lengths");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0 || v[i] < 0.0) throw Error("cosine distance expects non-negative vectors");
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw Error("cosine distance of a zero vector");
  if (u.size() > 0 && std::equal(u.begin(), u.end(), v.begin())) return 0.0;
  return std::clamp(1.0 - dot / std::sqrt(uu * vv), 0.0, 1.0);
}

}  // namespace trajeval::measures
