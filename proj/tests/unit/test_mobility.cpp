#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "trajeval/error.hpp"
#include "trajeval/mobility/io.hpp"
#include "trajeval/mobility/profile.hpp"
#include "trajeval/mobility/split.hpp"

namespace trajeval::mobility {
namespace {

using testing::make_dataset;
using testing::make_trajectory;
using testing::scratch_dir;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

TEST(Timestamp, Formats) {
  EXPECT_DOUBLE_EQ(parse_timestamp("2024-01-31T10:00:00Z"), 1706695200.0);
  EXPECT_DOUBLE_EQ(parse_timestamp("2024-01-31 10:00:00+02:00"), 1706688000.0);
  EXPECT_DOUBLE_EQ(parse_timestamp("1706695200"), 1706695200.0);
  EXPECT_DOUBLE_EQ(parse_timestamp("1970-01-01T00:00:00Z"), 0.0);
}

TEST(Timestamp, Malformed) {
  EXPECT_THROW(parse_timestamp("2024-13-01T00:00:00Z"), Error);
  EXPECT_THROW(parse_timestamp("2024-02-30T00:00:00Z"), Error);
  EXPECT_THROW(parse_timestamp("yesterday"), Error);
  EXPECT_THROW(parse_timestamp("2024-01-31T10:00:00Zjunk"), Error);
}

TEST(Ingest, GroupsAndSortsByTime) {
  const auto dir = scratch_dir("ingest-sort");
  const auto path = write_text(dir / "d.csv",
                               "user_id,traj_id,timestamp,x,y,category\n"
                               "u1,a,120,2,0,shop\n"
                               "u1,a,60,1,0,home\n"
                               "u2,b,0,5,5,\n"
                               "u1,a,0,0,0,home\n");
  const auto d = ingest_csv(path);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].traj_id, "a");
  ASSERT_EQ(d[0].size(), 3u);
  EXPECT_EQ(d[0].points[0].point.position, (Point2{0, 0}));
  EXPECT_EQ(d[0].points[2].point.position, (Point2{2, 0}));
  EXPECT_EQ(d.vocabulary().labels(), (std::vector<std::string>{"shop", "home"}));
  EXPECT_EQ(*d[0].points[0].category, 1u);
  EXPECT_FALSE(d[1].points[0].category.has_value());
  EXPECT_EQ(d.users(), (std::set<std::string>{"u1", "u2"}));
  EXPECT_EQ(d.metadata().crs.kind, Crs::Kind::Metric);
}

TEST(Ingest, ErrorsCarryLineNumbers) {
  const auto dir = scratch_dir("ingest-errors");
  auto message = [&](const std::string& body) {
    const auto p = write_text(dir / "bad.csv", body);
    try {
      ingest_csv(p);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("user_id,traj_id,timestamp,x,y\nu,a,0,1,2\nu,a,60,oops,2\n").find("line 3"),
            std::string::npos);
  EXPECT_NE(message("user_id,traj_id,timestamp,x,y\nu,a,0,1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message("user_id,traj_id,timestamp,x,y\nu,a,0,1,2\nv,a,60,1,2\n").find("two users"),
            std::string::npos);
  EXPECT_NE(message("user_id,traj_id,x,y\nu,a,1,2\n").find("timestamp"), std::string::npos);
  EXPECT_NE(message("").find("empty"), std::string::npos);
}

TEST(Ingest, StrictVocabulary) {
  const auto dir = scratch_dir("ingest-vocab");
  const auto path = write_text(dir / "d.csv", "user_id,traj_id,timestamp,x,y,category\nu,a,0,0,0,bar\n");
  IngestOptions opts;
  opts.vocabulary = CategoryVocabulary({"home"});
  opts.strict_vocabulary = true;
  EXPECT_THROW(ingest_csv(path, opts), Error);
  opts.strict_vocabulary = false;
  const auto d = ingest_csv(path, opts);
  EXPECT_EQ(*d[0].points[0].category, 1u);
}

TEST(Ingest, MinLengthDrops) {
  const auto dir = scratch_dir("ingest-minlen");
  const auto path = write_text(dir / "d.csv", "user_id,traj_id,timestamp,x,y\nu,a,0,0,0\nu,a,1,0,0\nu,b,0,0,0\n");
  IngestOptions opts;
  opts.min_length = 2;
  EXPECT_EQ(ingest_csv(path, opts).size(), 1u);
}

TEST(Projection, RoundTripAndScale) {
  const auto crs = Crs::azimuthal_equidistant(45.0, 7.0);
  const LatLon origin{45.0, 7.0};
  EXPECT_NEAR(crs.forward(origin).x, 0.0, 1e-9);
  // One degree of latitude is about 111.2 km on the mean sphere.
  const auto north = crs.forward({46.0, 7.0});
  EXPECT_NEAR(north.y, 111195.0, 5.0);
  EXPECT_NEAR(north.x, 0.0, 1e-6);
  for (const LatLon ll : {LatLon{45.3, 7.2}, LatLon{44.1, 6.5}, LatLon{45.0, 8.0}}) {
    const auto back = crs.inverse(crs.forward(ll));
    EXPECT_NEAR(back.lat, ll.lat, 1e-9);
    EXPECT_NEAR(back.lon, ll.lon, 1e-9);
  }
}

TEST(Io, GeographicRoundTripIsByteStable) {
  const auto dir = scratch_dir("io-geo");
  const auto src = write_text(dir / "src.csv",
                              "user_id,traj_id,timestamp,lat,lon,category\n"
                              "u1,a,2024-01-31T10:00:00Z,45.0712,7.6869,cafe\n"
                              "u1,a,2024-01-31T10:05:00Z,45.0731,7.6901,park\n"
                              "u2,\"b,1\",2024-01-31T11:00:00Z,45.05,7.66,cafe\n");
  const auto d = load_dataset(src);
  EXPECT_EQ(d.metadata().crs.kind, Crs::Kind::AzimuthalEquidistant);
  write_dataset(d, dir / "once.csv");
  const auto again = load_dataset(dir / "once.csv");
  EXPECT_EQ(again, d);
  write_dataset(again, dir / "twice.csv");
  EXPECT_EQ(slurp(dir / "once.csv"), slurp(dir / "twice.csv"));
  EXPECT_NE(slurp(dir / "once.csv").find("45.0712,7.6869"), std::string::npos);
  EXPECT_NE(slurp(dir / "once.csv").find("\"b,1\""), std::string::npos);
}

TEST(Io, MetricRoundTrip) {
  const auto d = testing::city_fixture(12, 3);
  const auto dir = scratch_dir("io-metric");
  const auto path = testing::write_fixture(d, dir, "city");
  const auto back = load_dataset(path);
  ASSERT_EQ(back.size(), d.size());
  EXPECT_EQ(back.vocabulary(), d.vocabulary());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(back[i], d[i]);
}

TEST(Io, MetadataJson) {
  DatasetMetadata meta{"x", Crs::azimuthal_equidistant(1.5, -2.0), CategoryVocabulary({"a", "b"})};
  EXPECT_EQ(metadata_from_json(metadata_to_json(meta)), meta);
  EXPECT_THROW(metadata_from_json("{\"crs\":{\"kind\":\"utm\"}}"), Error);
  EXPECT_THROW(metadata_from_json("not json"), Error);
}

TEST(Dataset, RejectsDuplicateIds) {
  std::vector<Trajectory> ts{make_trajectory("a", "u", {{0, 0}}), make_trajectory("a", "v", {{1, 1}})};
  EXPECT_THROW(make_dataset(ts), Error);
}

TEST(Dataset, SubsetAndCategories) {
  const auto d = testing::checkin_fixture(10, 1);
  EXPECT_TRUE(d.has_categories());
  const std::vector<std::size_t> idx{7, 2};
  const auto s = d.subset(idx);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], d[7]);
  EXPECT_EQ(s[1], d[2]);
  EXPECT_EQ(s.metadata(), d.metadata());
}

TEST(Split, LargestRemainderSizes) {
  EXPECT_EQ(split_sizes(8, {0.5, 0.25, 0.25}), (std::vector<std::size_t>{4, 2, 2}));
  EXPECT_EQ(split_sizes(10, {1.0 / 3, 1.0 / 3, 1.0 / 3}), (std::vector<std::size_t>{4, 3, 3}));
  for (std::size_t n = 0; n < 50; ++n) {
    const auto sizes = split_sizes(n, {0.3, 0.2, 0.2, 0.3});
    EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), n);
  }
  EXPECT_THROW(split_sizes(10, {0.5, 0.6}), Error);
  EXPECT_THROW(split_sizes(10, {1.2, -0.2}), Error);
}

TEST(Split, PartitionIsDisjointAndSeeded) {
  const auto d = testing::checkin_fixture(40, 2);
  const auto parts = split_dataset(d, {{0.5, 0.25, 0.25}, false}, 11);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0].size(), 20u);
  EXPECT_EQ(parts[1].size(), 10u);
  std::set<std::string> seen;
  for (const auto& p : parts)
    for (const auto& t : p.trajectories()) EXPECT_TRUE(seen.insert(t.traj_id).second);
  EXPECT_EQ(seen.size(), d.size());
  const auto again = split_dataset(d, {{0.5, 0.25, 0.25}, false}, 11);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(again[i], parts[i]);
  const auto other = split_dataset(d, {{0.5, 0.25, 0.25}, false}, 12);
  EXPECT_NE(other[0], parts[0]);
}

TEST(Split, UserCoverage) {
  const auto d = testing::tul_fixture(6, 5, 10.0, 4);
  std::vector<Trajectory> ts = d.trajectories();
  ts.push_back(make_trajectory("solo", "lonely", {{0, 0}, {1, 1}}));
  const auto data = d.with_trajectories(ts);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto parts = split_dataset(data, {{0.4, 0.6}, true}, seed);
    EXPECT_EQ(parts[0].users(), data.users());
    EXPECT_EQ(parts[1].users().count("lonely"), 0u);
  }
}

TEST(Mask, KeepsCeilOfFraction) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto idx = mask_indices(10, 0.25, seed);
    ASSERT_EQ(idx.size(), 3u);
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
    EXPECT_LT(idx.back(), 10u);
  }
  EXPECT_EQ(mask_indices(5, 1.0, 3), (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(mask_indices(4, 0.01, 3).size(), 1u);
  EXPECT_THROW(mask_indices(4, 0.0, 3), Error);
}

TEST(Mask, TrajectoryKeepsSelectedPoints) {
  const auto t = make_trajectory("a", "u", {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}});
  const auto m = mask_trajectory(t, 0.5, 9);
  const auto idx = mask_indices(6, 0.5, 9);
  ASSERT_EQ(m.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) EXPECT_EQ(m.points[i], t.points[idx[i]]);
}

TEST(Profile, HandComputed) {
  // Intervals 1, 1, 30 min; segments 3, 4 km and 0.
  std::vector<Trajectory> ts{
      make_trajectory("a", "u", {{0, 0}, {3000, 0}, {3000, 4000}}, 0, 60),
      make_trajectory("b", "u", {{0, 0}, {0, 0}}, 0, 1800),
  };
  const auto p = profile_dataset(make_dataset(ts));
  EXPECT_DOUBLE_EQ(p.mean_sampling_interval_min, 32.0 / 3.0);
  EXPECT_EQ(p.n_traj, 2u);
  EXPECT_DOUBLE_EQ(p.median_length, 2.5);
  EXPECT_DOUBLE_EQ(p.mean_traveled_km, 3.5);
  EXPECT_DOUBLE_EQ(p.mean_displacement_km, 7.0 / 3.0);
  // Median interval is 1 min; 30 min exceeds 10x.
  EXPECT_DOUBLE_EQ(p.gap_fraction, 1.0 / 3.0);
  EXPECT_EQ(profile_columns().size(), profile_values(p).size());
  EXPECT_THROW(profile_dataset(make_dataset({})), Error);
}

}  // namespace
}  // namespace trajeval::mobility
