#pragma once

#include <cstddef>
#include <vector>

#include "trajeval/geometry.hpp"
#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/result.hpp"
#include "trajeval/metrics/transition.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::metrics {

/// Up to k most probable next states from `current`, ties by cell order.
/// Unknown or sink states fall back to a uniform row, i.e. the first k
/// states in cell order.
std::vector<grid::CellId> top_k_next(const TransitionMatrix& model, const grid::CellId& current, std::size_t k);

/// Mean over real trajectories of the share of steps whose next cell is in
/// the top-k prediction of the synthetic kernel. Length-1 trajectories are
/// skipped and counted.
MetricValue next_location_prediction(const TransitionMatrix& syn_model, const grid::DiscretizedDataset& real,
                                     std::size_t k = 10);

/// Normalized distribution of the cells occupied at each sequence position.
std::vector<measures::CellDistribution> positional_distributions(const grid::DiscretizedDataset& data);

/// One step of population flow, V P; sink rows spread mass uniformly over
/// the model's states.
measures::CellDistribution propagate(const measures::CellDistribution& v, const TransitionMatrix& model);

/// Mean W1 between propagated and observed position distributions over
/// the first N positions, N the 90th percentile of trajectory lengths.
MetricValue global_flow_prediction(const TransitionMatrix& syn_model, const grid::DiscretizedDataset& real);

struct ClusterOptions {
  double eps_m = 1000.0;
  std::size_t min_points = 5;
};

/// DBSCAN labels (-1 noise, clusters numbered from 0 in discovery order)
/// and core flags.
struct Clustering {
  std::vector<int> labels;
  std::vector<bool> core;
  int clusters = 0;
};
Clustering dbscan(const std::vector<Point2>& points, const ClusterOptions& options);

/// Mean position of each trajectory.
std::vector<Point2> trajectory_centroids(const mobility::Dataset& data);

/// Mean silhouette of points under the given labels (-1 excluded).
/// Points alone in their cluster score 0.
double mean_silhouette(const std::vector<Point2>& points, const std::vector<int>& labels);

/// Clusters the synthetic centroids, assigns every real centroid to the
/// cluster of its nearest synthetic core point (noise when farther than
/// eps) and returns the mean silhouette of the real centroids.
MetricValue trajectory_clustering(const mobility::Dataset& syn, const mobility::Dataset& real,
                                  const ClusterOptions& options = {});

}  // namespace trajeval::metrics
