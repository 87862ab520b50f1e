#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajeval/grid/grid.hpp"
#include "trajeval/measures/kendall.hpp"
#include "trajeval/metrics/result.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::metrics {

/// Mean of the positive-duration step speeds of a trajectory, in km/h.
/// Empty when no step has a positive duration.
std::optional<double> trajectory_average_speed_kmh(const mobility::Trajectory& t);

/// Sum of consecutive point distances, in km.
double trajectory_traveled_km(const mobility::Trajectory& t);

/// W1 (km/h) between the per-trajectory average speed distributions.
MetricValue average_speed(const mobility::Dataset& real, const mobility::Dataset& syn);

/// W1 (km) between the per-trajectory traveled distance distributions.
MetricValue traveled_distance(const mobility::Dataset& real, const mobility::Dataset& syn);

/// Per-user d_u = (1 - tau_b(I_u, I_0)) / 2, where I_u ranks the user's
/// cells by visit count and I_0 ranks the same cells by cell index.
/// Users whose ranking is entirely tied are skipped and counted.
struct IndividualRankScores {
  std::vector<double> scores;
  std::size_t excluded = 0;
};
IndividualRankScores individual_rank_scores(const grid::DiscretizedDataset& data);

/// W1 between the per-user d_u distributions of the two datasets.
MetricValue i_rank(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn);

enum class PairwiseKind { Hausdorff, Frechet, Dtw, Cosine };
PairwiseKind pairwise_kind_from_string(const std::string& text);

/// All C(n, 2) distances inside one dataset. Spatial kinds are in km; the
/// cosine kind embeds trajectories as category-count vectors and skips
/// trajectories without categories.
struct PairwiseDistances {
  std::vector<double> distances;
  std::size_t excluded = 0;
};
PairwiseDistances intra_dataset_distances(const mobility::Dataset& data, PairwiseKind kind);

/// W1 between the two intra-dataset distance distributions. Real and
/// synthetic records are never compared with each other.
MetricValue pairwise_similarity(const mobility::Dataset& real, const mobility::Dataset& syn, PairwiseKind kind);

/// Visit counts per cell pooled over all points.
measures::RankVector<grid::CellId> global_rank(const grid::DiscretizedDataset& data);

/// tau_b between the pooled cell popularity rankings.
MetricValue g_rank(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn);

/// Category popularity ranking keyed by label.
measures::RankVector<std::string> category_rank(const mobility::Dataset& data);

/// tau_b between the category popularity rankings.
MetricValue categorical_g_rank(const mobility::Dataset& real, const mobility::Dataset& syn);

}  // namespace trajeval::metrics
