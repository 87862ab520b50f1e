#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trajeval/geometry.hpp"
#include "trajeval/grid/cell.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::grid {

/// Uniform square grid anchored at the CRS origin, optionally phase-shifted.
struct GridSpec {
  double cell_edge_m = 500.0;
  double offset_x = 0.0;
  double offset_y = 0.0;

  /// Throws unless the edge is positive and offsets lie in [0, edge).
  void validate() const;
  CellId cell_of(const Point2& p) const;
  Point2 centroid(const CellId& c) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct DiscretizedTrajectory {
  std::string traj_id;
  std::string user_id;
  std::vector<CellId> cells;
  std::vector<double> timestamps;
  std::vector<std::optional<mobility::CategoryId>> categories;

  std::size_t size() const { return cells.size(); }
};

struct DiscretizedDataset {
  GridSpec grid;
  std::vector<DiscretizedTrajectory> trajectories;
  mobility::CategoryVocabulary vocabulary;

  std::size_t transition_count() const;
};

DiscretizedDataset discretize(const mobility::Dataset& dataset, const GridSpec& grid);

struct GridDiagnostics {
  double unique_transition_fraction = 0.0;  // distinct (from, to) pairs / transitions
  double self_transition_fraction = 0.0;
  double occupancy_ratio = 0.0;  // visited cells / cells in the bounding box
};

/// Throws when the dataset has no transitions.
GridDiagnostics grid_diagnostics(const DiscretizedDataset& data);

/// Distances between consecutive points of every trajectory, in meters.
std::vector<double> segment_lengths(const mobility::Dataset& dataset);

/// Knee of a sampled curve: the point farthest from the chord joining its
/// endpoints after scaling both axes to [0, 1]. A curve with no deviation
/// from its chord returns the middle of the x range.
double find_elbow(const std::vector<double>& x, const std::vector<double>& y);

/// Midpoint of the smallest and largest candidate.
double consensus_edge(const std::vector<double>& candidates);

struct CellSizeSelection {
  double edge_m = 0.0;
  double p10_m = 0.0;
  double p50_m = 0.0;
  std::vector<double> candidates;
  std::vector<GridDiagnostics> diagnostics;  // one per candidate
  std::array<double, 3> elbows{};             // unique, self, occupancy
  std::optional<std::string> warning;
};

struct CellSizeOptions {
  double step_m = 50.0;
  std::size_t min_candidates = 5;
};

/// Sweeps edges between the 10th and 50th percentile of segment lengths and
/// returns the consensus of the three diagnostic elbows.
CellSizeSelection select_cell_size(const mobility::Dataset& dataset, const CellSizeOptions& options = {});

/// A grid-dependent score of a (real, synthetic) pair.
struct SweepMetric {
  std::string name;
  std::function<double(const DiscretizedDataset& real, const DiscretizedDataset& syn)> evaluate;
};

struct SweepOptions {
  double min_edge_m = 100.0;
  double max_edge_m = 1000.0;
  double step_m = 50.0;
  std::size_t offsets_per_axis = 3;
};

struct SweepRow {
  std::string metric;
  double edge_m = 0.0;
  std::optional<double> mean;
  std::optional<double> std;
  std::size_t n_offsets = 0;  // configurations that produced a value
  std::size_t n_failed = 0;
};

std::vector<double> sweep_edges(const SweepOptions& options);
std::vector<GridSpec> phase_shifts(double edge_m, std::size_t offsets_per_axis);

/// Rows ordered by metric (input order) then edge.
std::vector<SweepRow> stability_sweep(const mobility::Dataset& real, const mobility::Dataset& syn,
                                      const std::vector<SweepMetric>& metrics, const SweepOptions& options = {});

/// `metric,edge_m,mean,std,n_offsets`; failed cells are left empty.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace trajeval::grid
