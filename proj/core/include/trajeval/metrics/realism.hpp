#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "trajeval/geometry.hpp"
#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/result.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::metrics {

using Ring = std::vector<Point2>;
using Polyline = std::vector<Point2>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

/// Undirected road segment between two named nodes.
struct RoadEdge {
  std::string from;
  std::string to;
  Polyline geometry;
};

/// Implausible domain, accessible infrastructure and road graph, all in the
/// dataset CRS. Road edges also count as accessible infrastructure.
class ConstraintLayers {
 public:
  ConstraintLayers();
  ConstraintLayers(std::vector<Polygon> implausible, std::vector<Polyline> infrastructure_lines,
                   std::vector<Polygon> infrastructure_areas, std::vector<RoadEdge> roads);

  bool in_implausible_domain(const Point2& p) const;
  /// True when some accessible infrastructure lies within `radius_m`.
  bool near_infrastructure(const Point2& p, double radius_m) const;
  const std::vector<RoadEdge>& roads() const;
  bool has_roads() const { return !roads().empty(); }
  bool empty() const;

  struct Index;

 private:
  std::shared_ptr<const Index> index_;
};

/// Reads `implausible.geojson`, `infrastructure.geojson` and `roads.geojson`
/// from a directory; absent files give empty layers. Coordinates are
/// [lon, lat] projected with `crs`, or taken as meters for a metric CRS.
/// Road features are LineStrings with `from`/`to` node properties; without
/// them the rounded endpoint coordinates identify the nodes.
ConstraintLayers load_constraint_layers(const std::filesystem::path& directory, const mobility::Crs& crs);
ConstraintLayers parse_constraint_layers(const std::string& implausible_geojson,
                                         const std::string& infrastructure_geojson,
                                         const std::string& roads_geojson, const mobility::Crs& crs);

constexpr double kDefaultToleranceM = 30.0;

/// Inside the implausible domain and farther than `delta_m` from all
/// accessible infrastructure.
bool point_violation(const Point2& p, const ConstraintLayers& layers, double delta_m = kDefaultToleranceM);

/// Share of trajectories with at least one violating point.
MetricValue trajectory_implausibility(const mobility::Dataset& data, const ConstraintLayers& layers,
                                      double delta_m = kDefaultToleranceM);

/// Share of violating points over all points.
MetricValue location_implausibility(const mobility::Dataset& data, const ConstraintLayers& layers,
                                    double delta_m = kDefaultToleranceM);

struct CategoryMatchOptions {
  double k_min = 5;
  double dominance = 0.5;
};

/// Share of eligible real cells whose dominant category label is also the
/// dominant label of the synthetic data in that cell. Eligible cells have
/// at least k_min categorized observations and a top share >= dominance.
/// Count ties resolve to the lexicographically smallest label.
MetricValue category_location_match(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn,
                                    const CategoryMatchOptions& options = {});

/// Road edges nearest to the real points plus shortest paths joining
/// consecutive distinct edges of each trajectory.
std::vector<std::size_t> reconstruct_infrastructure(const mobility::Dataset& real, const ConstraintLayers& layers);

/// Mean distance (km) of synthetic points to the reconstructed
/// infrastructure, averaged per trajectory and then over trajectories.
MetricValue map_reconstruction(const mobility::Dataset& real, const mobility::Dataset& syn,
                               const ConstraintLayers& layers);

}  // namespace trajeval::metrics
