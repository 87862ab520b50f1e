#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "trajeval/geometry.hpp"

namespace trajeval::mobility {

using CategoryId = std::uint32_t;

/// Geographic source coordinates, kept so that serialization can reproduce
/// the ingested text exactly.
struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct GeoPoint {
  Point2 position;
  std::optional<LatLon> source;
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct TrajPoint {
  GeoPoint point;
  double timestamp = 0.0;  // seconds since epoch
  std::optional<CategoryId> category;
  friend bool operator==(const TrajPoint&, const TrajPoint&) = default;
};

struct Trajectory {
  std::string traj_id;
  std::string user_id;
  std::vector<TrajPoint> points;

  std::size_t size() const { return points.size(); }
  std::vector<Point2> positions() const;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

class CategoryVocabulary {
 public:
  CategoryVocabulary() = default;
  explicit CategoryVocabulary(std::vector<std::string> labels);

  std::optional<CategoryId> find(const std::string& label) const;
  /// Returns the id of `label`, appending it when absent.
  CategoryId intern(const std::string& label);
  const std::string& label(CategoryId id) const;
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  friend bool operator==(const CategoryVocabulary& a, const CategoryVocabulary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, CategoryId> index_;
};

/// Projection applied once at ingestion. `Metric` means the input columns
/// already hold projected meters.
struct Crs {
  enum class Kind { Metric, AzimuthalEquidistant };
  Kind kind = Kind::Metric;
  double lat0 = 0.0;
  double lon0 = 0.0;

  static Crs metric() { return {}; }
  static Crs azimuthal_equidistant(double lat0, double lon0) {
    return {Kind::AzimuthalEquidistant, lat0, lon0};
  }

  Point2 forward(const LatLon& ll) const;
  LatLon inverse(const Point2& p) const;

  friend bool operator==(const Crs&, const Crs&) = default;
};

struct DatasetMetadata {
  std::string name;
  Crs crs;
  CategoryVocabulary vocabulary;
  friend bool operator==(const DatasetMetadata&, const DatasetMetadata&) = default;
};

/// Immutable collection of trajectories. The user set is derived from the
/// trajectories and trajectory ids are unique.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Trajectory> trajectories, DatasetMetadata metadata);

  const std::vector<Trajectory>& trajectories() const { return trajectories_; }
  const std::set<std::string>& users() const { return users_; }
  const DatasetMetadata& metadata() const { return metadata_; }
  const CategoryVocabulary& vocabulary() const { return metadata_.vocabulary; }

  std::size_t size() const { return trajectories_.size(); }
  bool empty() const { return trajectories_.empty(); }
  const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }

  std::size_t point_count() const;
  /// True when at least one point carries a category.
  bool has_categories() const;

  /// New dataset with the same metadata holding the given trajectories.
  Dataset with_trajectories(std::vector<Trajectory> trajectories) const;
  /// Subset by position, preserving the given order.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.trajectories_ == b.trajectories_ && a.metadata_ == b.metadata_;
  }

 private:
  std::vector<Trajectory> trajectories_;
  std::set<std::string> users_;
  DatasetMetadata metadata_;
};

}  // namespace trajeval::mobility
