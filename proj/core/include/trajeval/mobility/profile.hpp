#pragma once

#include <string>
#include <vector>

#include "trajeval/mobility/types.hpp"

namespace trajeval::mobility {

/// Descriptors of a trajectory dataset, in the column order of the
/// dataset-statistics table.
struct DatasetProfile {
  double mean_sampling_interval_min = 0.0;
  double cv_sampling_interval = 0.0;
  double gap_fraction = 0.0;  // share of intervals above 10x the median
  std::size_t n_traj = 0;
  double median_length = 0.0;
  double p95_length = 0.0;
  double mean_traveled_km = 0.0;
  double mean_displacement_km = 0.0;
};

DatasetProfile profile_dataset(const Dataset& dataset);

std::vector<std::string> profile_columns();
std::vector<double> profile_values(const DatasetProfile& profile);

}  // namespace trajeval::mobility
