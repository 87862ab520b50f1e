#include "fixtures.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <numbers>
#include <random>
#include <unistd.h>

#include "trajeval/mobility/io.hpp"
#include "trajeval/random.hpp"

namespace trajeval::testing {

using mobility::CategoryId;
using mobility::Dataset;
using mobility::Trajectory;

namespace {

constexpr double kSpacing = 400.0;
constexpr int kNodes = 15;  // per axis
const std::vector<std::string> kCityLabels{"home", "work", "food", "shop", "park"};

CategoryId node_category(int i, int j) { return static_cast<CategoryId>((i * 3 + j * 7) % 5); }

std::string node_key(int i, int j) { return fmt::format("{},{}", i, j); }

std::string polygon_feature(double x0, double y0, double x1, double y1) {
  return fmt::format(
      R"({{"type":"Feature","properties":{{}},"geometry":{{"type":"Polygon","coordinates":[[[{0},{1}],[{2},{1}],[{2},{3}],[{0},{3}],[{0},{1}]]]}}}})",
      x0, y0, x1, y1);
}

}  // namespace

Trajectory make_trajectory(const std::string& traj_id, const std::string& user_id, const std::vector<XY>& xy,
                           double t0, double dt, const std::vector<CategoryId>& categories) {
  Trajectory t{traj_id, user_id, {}};
  for (std::size_t i = 0; i < xy.size(); ++i) {
    mobility::TrajPoint p;
    p.point.position = {xy[i].first, xy[i].second};
    p.timestamp = t0 + dt * static_cast<double>(i);
    if (i < categories.size()) p.category = categories[i];
    t.points.push_back(p);
  }
  return t;
}

Dataset make_dataset(std::vector<Trajectory> trajectories, std::vector<std::string> labels, const std::string& name) {
  mobility::DatasetMetadata meta;
  meta.name = name;
  meta.crs = mobility::Crs::metric();
  meta.vocabulary = mobility::CategoryVocabulary(std::move(labels));
  return Dataset(std::move(trajectories), std::move(meta));
}

Dataset translate(const Dataset& d, double dx, double dy) {
  auto ts = d.trajectories();
  for (auto& t : ts)
    for (auto& p : t.points) {
      p.point.position.x += dx;
      p.point.position.y += dy;
      p.point.source.reset();
    }
  return d.with_trajectories(std::move(ts));
}

Dataset city_fixture(std::size_t trajectories, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> jitter(-20.0, 20.0);
  std::uniform_int_distribution<int> step(0, 3);
  std::uniform_int_distribution<int> length(8, 15);
  std::uniform_int_distribution<int> hour(7, 19);
  std::uniform_int_distribution<int> day(0, 6);
  // Two districts, far enough apart to form separate clusters.
  const int district_lo[2] = {0, 10};

  std::vector<Trajectory> out;
  const std::size_t users = std::max<std::size_t>(1, trajectories / 3);
  std::vector<std::pair<int, int>> homes;
  for (std::size_t u = 0; u < users; ++u) {
    const int d = static_cast<int>(u % 2);
    std::uniform_int_distribution<int> node(district_lo[d], district_lo[d] + 4);
    homes.emplace_back(node(rng), node(rng));
  }
  for (std::size_t k = 0; k < trajectories; ++k) {
    const std::size_t u = k % users;
    const int d = static_cast<int>(u % 2);
    auto [i, j] = homes[u];
    std::vector<XY> xy;
    std::vector<CategoryId> cats;
    const int n = length(rng);
    for (int s = 0; s < n; ++s) {
      xy.emplace_back(i * kSpacing + jitter(rng), j * kSpacing + jitter(rng));
      cats.push_back(node_category(i, j));
      const int dir = step(rng);
      const int ni = i + (dir == 0) - (dir == 1), nj = j + (dir == 2) - (dir == 3);
      if (ni >= district_lo[d] && ni <= district_lo[d] + 4 && nj >= district_lo[d] && nj <= district_lo[d] + 4) {
        i = ni;
        j = nj;
      }
    }
    // Some walks cut across the lake block of the first district.
    if (d == 0 && k % 7 == 0) {
      xy.insert(xy.begin() + n / 2, {2.5 * kSpacing + jitter(rng), 2.5 * kSpacing + jitter(rng)});
      cats.insert(cats.begin() + n / 2, node_category(2, 2));
    }
    const double t0 = 1700006400.0 + day(rng) * 86400.0 + hour(rng) * 3600.0;
    out.push_back(make_trajectory(fmt::format("t{:03}", k), fmt::format("u{:02}", u), xy, t0, 300.0, cats));
  }
  return make_dataset(std::move(out), kCityLabels, "city");
}

CityLayers city_layers() {
  std::string roads = R"({"type":"FeatureCollection","features":[)";
  bool first = true;
  auto edge = [&](int i, int j, int i2, int j2) {
    roads += first ? "" : ",";
    first = false;
    roads += fmt::format(
        R"({{"type":"Feature","properties":{{"from":"{}","to":"{}"}},"geometry":{{"type":"LineString","coordinates":[[{},{}],[{},{}]]}}}})",
        node_key(i, j), node_key(i2, j2), i * kSpacing, j * kSpacing, i2 * kSpacing, j2 * kSpacing);
  };
  for (int i = 0; i < kNodes; ++i)
    for (int j = 0; j < kNodes; ++j) {
      if (i + 1 < kNodes) edge(i, j, i + 1, j);
      if (j + 1 < kNodes) edge(i, j, i, j + 1);
    }
  roads += "]}";
  // The lake fills the middle of the block between nodes (2, 2) and (3, 3).
  const std::string lake = R"({"type":"FeatureCollection","features":[)" +
                           polygon_feature(2.5 * kSpacing - 100, 2.5 * kSpacing - 100, 2.5 * kSpacing + 100,
                                           2.5 * kSpacing + 100) +
                           "]}";
  const std::string park = R"({"type":"FeatureCollection","features":[)" +
                           polygon_feature(11 * kSpacing, 11 * kSpacing, 12 * kSpacing, 12 * kSpacing) + "]}";
  return {lake, park, roads};
}

metrics::ConstraintLayers city_constraint_layers() {
  const auto l = city_layers();
  return metrics::parse_constraint_layers(l.implausible, l.infrastructure, l.roads, mobility::Crs::metric());
}

void write_city_layers(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto l = city_layers();
  std::ofstream(dir / "implausible.geojson") << l.implausible;
  std::ofstream(dir / "infrastructure.geojson") << l.infrastructure;
  std::ofstream(dir / "roads.geojson") << l.roads;
}

Dataset checkin_fixture(std::size_t trajectories, std::uint64_t seed, std::size_t min_len, std::size_t max_len) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 10000.0);
  std::uniform_int_distribution<std::size_t> length(min_len, max_len);
  std::uniform_int_distribution<CategoryId> category(0, 5);
  std::uniform_real_distribution<double> start(0.0, 7 * 86400.0);
  std::uniform_real_distribution<double> gap(3600.0, 4 * 3600.0);
  std::vector<Trajectory> out;
  for (std::size_t k = 0; k < trajectories; ++k) {
    Trajectory t{fmt::format("c{:04}", k), fmt::format("u{:03}", k % 97), {}};
    double ts = 1700006400.0 + start(rng);
    const auto n = length(rng);
    for (std::size_t i = 0; i < n; ++i) {
      mobility::TrajPoint p;
      p.point.position = {coord(rng), coord(rng)};
      p.timestamp = ts;
      p.category = category(rng);
      t.points.push_back(p);
      ts += gap(rng);
    }
    out.push_back(std::move(t));
  }
  return make_dataset(std::move(out), {"food", "shop", "work", "home", "gym", "bar"}, "checkins");
}

Dataset tul_fixture(std::size_t users, std::size_t per_user, double spread_m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> noise(0.0, spread_m);
  std::vector<Trajectory> out;
  constexpr double kRadius = 3000.0;
  for (std::size_t u = 0; u < users; ++u) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(u) / static_cast<double>(users);
    const double hx = kRadius * std::cos(angle), hy = kRadius * std::sin(angle);
    // Each user repeats a route heading outwards from home.
    for (std::size_t k = 0; k < per_user; ++k) {
      std::vector<XY> xy;
      for (int s = 0; s < 10; ++s) {
        const double r = 150.0 * s;
        xy.emplace_back(hx + r * std::cos(angle) + noise(rng), hy + r * std::sin(angle) + noise(rng));
      }
      out.push_back(make_trajectory(fmt::format("r{:02}_{:02}", u, k), fmt::format("user{:02}", u), xy,
                                    1700006400.0 + 86400.0 * static_cast<double>(k), 120.0));
    }
  }
  return make_dataset(std::move(out), {}, "tul");
}

Dataset markov_cycle_fixture(double edge_m, std::size_t cycle, std::size_t length) {
  std::vector<XY> ring;
  for (std::size_t c = 0; c < cycle; ++c) ring.emplace_back((static_cast<double>(c) + 0.5) * edge_m, 0.5 * edge_m);
  std::vector<Trajectory> out;
  for (std::size_t s = 0; s < cycle; ++s) {
    for (std::size_t copy = 0; copy < 2; ++copy) {
      std::vector<XY> xy;
      for (std::size_t i = 0; i < length; ++i) {
        const auto [x, y] = ring[(s + i) % cycle];
        xy.emplace_back(x + static_cast<double>(copy), y + static_cast<double>(i));
      }
      out.push_back(make_trajectory(fmt::format("m{}_{}", s, copy), fmt::format("u{}", s), xy,
                                    3600.0 * static_cast<double>(s), 600.0));
    }
  }
  return make_dataset(std::move(out), {}, "cycle");
}

Dataset two_cluster_fixture(std::size_t per_cluster, double separation_m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> noise(0.0, 60.0);
  std::vector<Trajectory> out;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < per_cluster; ++k) {
      std::vector<XY> xy;
      for (int s = 0; s < 6; ++s) xy.emplace_back(c * separation_m + noise(rng), noise(rng));
      out.push_back(make_trajectory(fmt::format("k{}_{:02}", c, k), fmt::format("u{}_{}", c, k % 5), xy));
    }
  }
  return make_dataset(std::move(out), {}, "two_clusters");
}

std::filesystem::path write_fixture(const Dataset& d, const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (name + ".csv");
  mobility::write_dataset(d, path);
  return path;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / fmt::format("trajeval-{}-{}", name, ::getpid());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace trajeval::testing
