#include "trajeval/mobility/types.hpp"

#include <cmath>
#include <numbers>
#include <unordered_set>

#include "trajeval/error.hpp"

namespace trajeval::mobility {

namespace {

constexpr double kEarthRadiusM = 6371008.8;
constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

std::vector<Point2> Trajectory::positions() const {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.point.position);
  return out;
}

CategoryVocabulary::CategoryVocabulary(std::vector<std::string> labels) {
  for (auto& label : labels) {
    if (index_.count(label)) throw Error("duplicate category label '" + label + "'");
    intern(label);
  }
}

std::optional<CategoryId> CategoryVocabulary::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CategoryId CategoryVocabulary::intern(const std::string& label) {
  if (auto id = find(label)) return *id;
  const auto id = static_cast<CategoryId>(labels_.size());
  labels_.push_back(label);
  index_.emplace(label, id);
  return id;
}

const std::string& CategoryVocabulary::label(CategoryId id) const {
  if (id >= labels_.size()) throw Error("category id out of vocabulary range");
  return labels_[id];
}

// Spherical azimuthal-equidistant projection around (lat0, lon0).
Point2 Crs::forward(const LatLon& ll) const {
  if (kind == Kind::Metric) return {ll.lon, ll.lat};
  const double phi0 = lat0 * kDeg;
  const double phi = ll.lat * kDeg;
  const double dlambda = (ll.lon - lon0) * kDeg;
  const double hav = std::pow(std::sin((phi - phi0) / 2), 2) +
                     std::cos(phi0) * std::cos(phi) * std::pow(std::sin(dlambda / 2), 2);
  const double c = 2.0 * std::asin(std::min(1.0, std::sqrt(hav)));
  const double k = c < 1e-12 ? 1.0 : c / std::sin(c);
  const double x = kEarthRadiusM * k * std::cos(phi) * std::sin(dlambda);
  const double y = kEarthRadiusM * k *
                   (std::cos(phi0) * std::sin(phi) - std::sin(phi0) * std::cos(phi) * std::cos(dlambda));
  return {x, y};
}

LatLon Crs::inverse(const Point2& p) const {
  if (kind == Kind::Metric) return {p.y, p.x};
  const double phi0 = lat0 * kDeg;
  const double rho = std::hypot(p.x, p.y);
  if (rho < 1e-9) return {lat0, lon0};
  const double c = rho / kEarthRadiusM;
  const double phi =
      std::asin(std::cos(c) * std::sin(phi0) + p.y * std::sin(c) * std::cos(phi0) / rho);
  const double lambda = lon0 * kDeg + std::atan2(p.x * std::sin(c), rho * std::cos(phi0) * std::cos(c) -
                                                                       p.y * std::sin(phi0) * std::sin(c));
  return {phi / kDeg, lambda / kDeg};
}

Dataset::Dataset(std::vector<Trajectory> trajectories, DatasetMetadata metadata)
    : trajectories_(std::move(trajectories)), metadata_(std::move(metadata)) {
  std::unordered_set<std::string> ids;
  for (const auto& t : trajectories_) {
    if (t.points.empty()) throw Error("trajectory '" + t.traj_id + "' has no points");
    if (!ids.insert(t.traj_id).second) throw Error("duplicate trajectory id '" + t.traj_id + "'");
    for (std::size_t i = 0; i < t.points.size(); ++i) {
      const auto& p = t.points[i];
      if (!std::isfinite(p.point.position.x) || !std::isfinite(p.point.position.y) ||
          !std::isfinite(p.timestamp)) {
        throw Error("non-finite point in trajectory '" + t.traj_id + "'");
      }
      if (i > 0 && p.timestamp < t.points[i - 1].timestamp) {
        throw Error("timestamps decrease in trajectory '" + t.traj_id + "'");
      }
      if (p.category && *p.category >= metadata_.vocabulary.size()) {
        throw Error("category outside vocabulary in trajectory '" + t.traj_id + "'");
      }
    }
    users_.insert(t.user_id);
  }
}

std::size_t Dataset::point_count() const {
  std::size_t n = 0;
  for (const auto& t : trajectories_) n += t.points.size();
  return n;
}

bool Dataset::has_categories() const {
  for (const auto& t : trajectories_)
    for (const auto& p : t.points)
      if (p.category) return true;
  return false;
}

Dataset Dataset::with_trajectories(std::vector<Trajectory> trajectories) const {
  return Dataset(std::move(trajectories), metadata_);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<Trajectory> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(trajectories_.at(i));
  return with_trajectories(std::move(picked));
}

}  // namespace trajeval::mobility
