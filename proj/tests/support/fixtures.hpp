#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/metrics/realism.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::testing {

using XY = std::pair<double, double>;

/// Trajectory in projected meters; points `dt` seconds apart from `t0`.
mobility::Trajectory make_trajectory(const std::string& traj_id, const std::string& user_id,
                                     const std::vector<XY>& xy, double t0 = 0.0, double dt = 60.0,
                                     const std::vector<mobility::CategoryId>& categories = {});

mobility::Dataset make_dataset(std::vector<mobility::Trajectory> trajectories,
                               std::vector<std::string> labels = {}, const std::string& name = "fixture");

/// Same dataset shifted by (dx, dy) meters.
mobility::Dataset translate(const mobility::Dataset& d, double dx, double dy);

/// Walks on a 400 m street lattice in two districts 4 km apart. Points sit
/// within 20 m of lattice nodes and carry the category of their node; every
/// seventh walk of the first district crosses the lake block once.
mobility::Dataset city_fixture(std::size_t trajectories = 60, std::uint64_t seed = 7);

/// GeoJSON layers matching city_fixture: the street lattice as roads, a
/// lake polygon over one block and a park as infrastructure.
struct CityLayers {
  std::string implausible;
  std::string infrastructure;
  std::string roads;
};
CityLayers city_layers();
metrics::ConstraintLayers city_constraint_layers();
void write_city_layers(const std::filesystem::path& dir);

/// Check-in-like records: uniform points in a 10 km box, lengths in
/// [min_len, max_len], six categories, random hours over one week.
mobility::Dataset checkin_fixture(std::size_t trajectories, std::uint64_t seed, std::size_t min_len = 12,
                                  std::size_t max_len = 16);

/// Users with home regions on a ring; trajectories scatter around the home
/// with `spread_m`.
mobility::Dataset tul_fixture(std::size_t users, std::size_t per_user, double spread_m, std::uint64_t seed);

/// Cells visited in a deterministic cycle; every trajectory has the same
/// length and starts are balanced, so V_n P = V_{n+1} exactly.
mobility::Dataset markov_cycle_fixture(double edge_m = 500.0, std::size_t cycle = 4, std::size_t length = 6);

/// Two well separated groups of trajectories.
mobility::Dataset two_cluster_fixture(std::size_t per_cluster = 20, double separation_m = 50000.0,
                                      std::uint64_t seed = 3);

/// Writes the dataset to a CSV (with sidecar) under `dir` and returns the path.
std::filesystem::path write_fixture(const mobility::Dataset& d, const std::filesystem::path& dir,
                                    const std::string& name);

/// Fresh empty directory under the system temp directory.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace trajeval::testing
