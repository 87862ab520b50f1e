#pragma once

#include <span>

#include "trajeval/geometry.hpp"

namespace trajeval::measures {

/// Symmetric Hausdorff distance between two point sets.
double hausdorff(std::span<const Point2> a, std::span<const Point2> b);

/// Discrete Frechet distance (coupling-lattice dynamic programme).
double discrete_frechet(std::span<const Point2> a, std::span<const Point2> b);

/// Dynamic time warping with Euclidean local cost; accumulated, not averaged.
double dtw(std::span<const Point2> a, std::span<const Point2> b);

/// 1 - cos(u, v) for non-negative, non-zero vectors; clamped to [0, 1].
double cosine_distance(std::span<const double> u, std::span<const double> v);

}  // namespace trajeval::measures
