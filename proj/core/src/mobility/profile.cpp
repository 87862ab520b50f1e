#include "trajeval/mobility/profile.hpp"

#include "trajeval/error.hpp"
#include "trajeval/stats.hpp"

namespace trajeval::mobility {

DatasetProfile profile_dataset(const Dataset& dataset) {
  if (dataset.empty()) throw Error("cannot profile an empty dataset");

  std::vector<double> intervals_min, segments_km, traveled_km, lengths;
  for (const auto& t : dataset.trajectories()) {
    lengths.push_back(static_cast<double>(t.size()));
    std::vector<double> steps;
    for (std::size_t i = 1; i < t.size(); ++i) {
      intervals_min.push_back((t.points[i].timestamp - t.points[i - 1].timestamp) / 60.0);
      const double km = distance(t.points[i].point.position, t.points[i - 1].point.position) / 1000.0;
      segments_km.push_back(km);
      steps.push_back(km);
    }
    double total = 0.0;
    for (double s : steps) total += s;
    traveled_km.push_back(total);
  }

  DatasetProfile p;
  p.n_traj = dataset.size();
  p.median_length = stats::median(lengths);
  p.p95_length = stats::percentile(lengths, 95.0);
  p.mean_traveled_km = stats::mean(traveled_km);
  if (!intervals_min.empty()) {
    p.mean_sampling_interval_min = stats::mean(intervals_min);
    p.cv_sampling_interval = p.mean_sampling_interval_min > 0.0
                                 ? stats::stddev(intervals_min) / p.mean_sampling_interval_min
                                 : 0.0;
    const double gap = 10.0 * stats::median(intervals_min);
    std::size_t above = 0;
    for (double dt : intervals_min) above += dt > gap ? 1 : 0;
    p.gap_fraction = static_cast<double>(above) / static_cast<double>(intervals_min.size());
    p.mean_displacement_km = stats::mean(segments_km);
  }
  return p;
}

std::vector<std::string> profile_columns() {
  return {"mean_dt_min", "cv_dt",       "gap_fraction",       "n_traj",
          "median_length", "p95_length", "mean_traveled_km", "mean_displacement_km"};
}

std::vector<double> profile_values(const DatasetProfile& p) {
  return {p.mean_sampling_interval_min, p.cv_sampling_interval, p.gap_fraction,
          static_cast<double>(p.n_traj),  p.median_length,        p.p95_length,
          p.mean_traveled_km,             p.mean_displacement_km};
}

}  // namespace trajeval::mobility
