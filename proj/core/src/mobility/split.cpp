#include "trajeval/mobility/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

#include "trajeval/error.hpp"
#include "trajeval/random.hpp"

namespace trajeval::mobility {

namespace {

void shuffle(std::vector<std::size_t>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(values[i - 1], values[pick(rng)]);
  }
}

}  // namespace

std::vector<std::size_t> split_sizes(std::size_t total, const std::vector<double>& fractions) {
  if (fractions.empty()) throw Error("split requires at least one fraction");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw Error("split fractions must be non-negative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("split fractions must sum to 1");

  std::vector<std::size_t> sizes(fractions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(total);
    // Nudge so that 2/3 * 9 lands on 6 rather than 5.999...
    sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    assigned += sizes[i];
    remainders.emplace_back(exact - static_cast<double>(sizes[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++sizes[remainders[k].second];
  return sizes;
}

std::vector<Dataset> split_dataset(const Dataset& dataset, const SplitSpec& spec,
                                   std::uint64_t seed) {
  const auto sizes = split_sizes(dataset.size(), spec.fractions);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_rng(seed);
  shuffle(order, rng);

  std::vector<std::vector<std::size_t>> parts(sizes.size());
  if (spec.user_coverage) {
    // One trajectory per user is reserved for the first part.
    std::unordered_set<std::string> seen;
    std::vector<std::size_t> reserved, rest;
    for (auto i : order) {
      if (seen.insert(dataset[i].user_id).second) reserved.push_back(i);
      else rest.push_back(i);
    }
    if (reserved.size() > sizes[0]) {
      throw Error("split infeasible: " + std::to_string(reserved.size()) +
                  " users need coverage but the first part holds " + std::to_string(sizes[0]));
    }
    parts[0] = reserved;
    std::size_t cursor = 0;
    while (parts[0].size() < sizes[0]) parts[0].push_back(rest[cursor++]);
    for (std::size_t p = 1; p < sizes.size(); ++p)
      for (std::size_t k = 0; k < sizes[p]; ++k) parts[p].push_back(rest[cursor++]);
  } else {
    std::size_t cursor = 0;
    for (std::size_t p = 0; p < sizes.size(); ++p)
      for (std::size_t k = 0; k < sizes[p]; ++k) parts[p].push_back(order[cursor++]);
  }

  std::vector<Dataset> out;
  out.reserve(parts.size());
  for (auto& part : parts) {
    std::sort(part.begin(), part.end());
    out.push_back(dataset.subset(part));
  }
  return out;
}

std::vector<std::size_t> mask_indices(std::size_t length, double keep_fraction,
                                      std::uint64_t seed) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw Error("keep_fraction must lie in (0, 1]");
  if (length == 0) throw Error("cannot mask an empty trajectory");
  auto keep = static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(length) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, length);

  std::vector<std::size_t> indices(length);
  std::iota(indices.begin(), indices.end(), 0);
  if (keep == length) return indices;
  Rng rng = make_rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, length - 1);
    std::swap(indices[i], indices[pick(rng)]);
  }
  indices.resize(keep);
  std::sort(indices.begin(), indices.end());
  return indices;
}

Trajectory mask_trajectory(const Trajectory& trajectory, double keep_fraction,
                           std::uint64_t seed) {
  Trajectory out{trajectory.traj_id, trajectory.user_id, {}};
  for (auto i : mask_indices(trajectory.size(), keep_fraction, seed))
    out.points.push_back(trajectory.points[i]);
  return out;
}

}  // namespace trajeval::mobility
