#pragma once

#include <cstdint>
#include <vector>

#include "trajeval/mobility/types.hpp"

namespace trajeval::mobility {

struct SplitSpec {
  std::vector<double> fractions;
  /// Every user with >= 2 trajectories keeps one in the first part, and
  /// single-trajectory users are confined to the first part.
  bool user_coverage = false;
};

/// Part sizes by largest remainder; they always sum to `total`.
std::vector<std::size_t> split_sizes(std::size_t total, const std::vector<double>& fractions);

/// Seeded trajectory-level partition. Each part preserves source order.
std::vector<Dataset> split_dataset(const Dataset& dataset, const SplitSpec& spec,
                                   std::uint64_t seed);

/// Positions retained by masking: ceil(keep_fraction * length) distinct
/// indices, ascending.
std::vector<std::size_t> mask_indices(std::size_t length, double keep_fraction,
                                      std::uint64_t seed);

Trajectory mask_trajectory(const Trajectory& trajectory, double keep_fraction,
                           std::uint64_t seed);

}  // namespace trajeval::mobility
