#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "trajeval/error.hpp"
#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/statistics.hpp"
#include "trajeval/metrics/transition.hpp"
#include "trajeval/random.hpp"

namespace trajeval::grid {
namespace {

using testing::make_dataset;
using testing::make_trajectory;

TEST(GridSpec, CellOfFloorsAndShifts) {
  const GridSpec g{100.0, 0.0, 0.0};
  EXPECT_EQ(g.cell_of({0, 0}), (CellId{0, 0}));
  EXPECT_EQ(g.cell_of({99.999, 100.0}), (CellId{0, 1}));
  EXPECT_EQ(g.cell_of({-0.001, -100.0}), (CellId{-1, -1}));
  EXPECT_EQ(g.cell_of({-100.001, 250}), (CellId{-2, 2}));
  const GridSpec shifted{100.0, 40.0, 70.0};
  EXPECT_EQ(shifted.cell_of({39.0, 69.0}), (CellId{-1, -1}));
  EXPECT_EQ(shifted.cell_of({40.0, 70.0}), (CellId{0, 0}));
  EXPECT_EQ(shifted.centroid({0, 0}), (Point2{90.0, 120.0}));
  for (const Point2 p : {Point2{12.5, -313.0}, Point2{1e5, 3.3}}) {
    EXPECT_EQ(shifted.cell_of(shifted.centroid(shifted.cell_of(p))), shifted.cell_of(p));
  }
}

TEST(GridSpec, Validation) {
  EXPECT_THROW((GridSpec{0.0}.validate()), Error);
  EXPECT_THROW((GridSpec{-5.0}.validate()), Error);
  EXPECT_THROW((GridSpec{100.0, 100.0, 0.0}.validate()), Error);
  EXPECT_THROW((GridSpec{100.0, 0.0, -1.0}.validate()), Error);
  EXPECT_NO_THROW((GridSpec{100.0, 99.0, 0.0}.validate()));
}

TEST(CellId, RowMajorOrder) {
  EXPECT_LT((CellId{5, 0}), (CellId{0, 1}));
  EXPECT_LT((CellId{0, 1}), (CellId{1, 1}));
}

TEST(Discretize, KeepsTimestampsAndCategories) {
  const auto d = make_dataset({make_trajectory("a", "u", {{10, 10}, {150, 10}, {160, 290}}, 100, 60, {0, 1, 1})},
                              {"x", "y"});
  const auto g = discretize(d, {100.0});
  ASSERT_EQ(g.trajectories.size(), 1u);
  const auto& t = g.trajectories[0];
  EXPECT_EQ(t.cells, (std::vector<CellId>{{0, 0}, {1, 0}, {1, 2}}));
  EXPECT_EQ(t.timestamps, (std::vector<double>{100, 160, 220}));
  EXPECT_EQ(*t.categories[1], 1u);
  EXPECT_EQ(g.transition_count(), 2u);
  EXPECT_EQ(g.vocabulary, d.vocabulary());
}

TEST(Diagnostics, HandComputed) {
  // Cells A A B A with A=(0,0), B=(1,0); a second walk C D with C=(0,2), D=(0,2).
  const auto d = make_dataset({make_trajectory("a", "u", {{10, 10}, {20, 20}, {150, 10}, {30, 30}}),
                               make_trajectory("b", "u", {{10, 210}, {20, 220}})});
  const auto diag = grid_diagnostics(discretize(d, {100.0}));
  // Transitions (A,A) (A,B) (B,A) (C,C): 4 distinct of 4, 2 self.
  EXPECT_DOUBLE_EQ(diag.unique_transition_fraction, 1.0);
  EXPECT_DOUBLE_EQ(diag.self_transition_fraction, 0.5);
  // Visited A, B, C inside a 2 x 3 box.
  EXPECT_DOUBLE_EQ(diag.occupancy_ratio, 0.5);
  const auto single = make_dataset({make_trajectory("a", "u", {{0, 0}})});
  EXPECT_THROW(grid_diagnostics(discretize(single, {100.0})), Error);
}

TEST(Elbow, KneeAndFlat) {
  EXPECT_DOUBLE_EQ(find_elbow({0, 1, 2, 3, 4}, {0, 0.8, 0.9, 0.95, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(find_elbow({0, 1, 2, 3, 4}, {1.0, 0.2, 0.1, 0.05, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(find_elbow({100, 150, 200}, {1, 2, 3}), 150.0);
  EXPECT_DOUBLE_EQ(find_elbow({100, 150, 200, 250}, {5, 5, 5, 5}), 175.0);
  EXPECT_THROW(find_elbow({}, {}), Error);
  EXPECT_DOUBLE_EQ(consensus_edge({300, 150, 250}), 225.0);
}

TEST(CellSize, SelectsInsidePercentileRange) {
  const auto d = testing::city_fixture(60, 5);
  const auto sel = select_cell_size(d);
  EXPECT_FALSE(sel.warning.has_value());
  EXPECT_LE(sel.p10_m, sel.p50_m);
  ASSERT_FALSE(sel.candidates.empty());
  EXPECT_EQ(sel.candidates.size(), sel.diagnostics.size());
  for (double c : sel.candidates) {
    EXPECT_GE(c, sel.p10_m);
    EXPECT_LE(c, sel.p50_m);
  }
  for (double e : sel.elbows) {
    EXPECT_GE(e, sel.candidates.front());
    EXPECT_LE(e, sel.candidates.back());
  }
  const auto [lo, hi] = std::minmax_element(sel.elbows.begin(), sel.elbows.end());
  EXPECT_DOUBLE_EQ(sel.edge_m, (*lo + *hi) / 2.0);
}

TEST(CellSize, DegenerateSegments) {
  const auto d = make_dataset({make_trajectory("a", "u", {{0, 0}, {100, 0}, {200, 0}, {300, 0}})});
  const auto sel = select_cell_size(d);
  EXPECT_DOUBLE_EQ(sel.edge_m, 100.0);
  EXPECT_TRUE(sel.warning.has_value());
  const auto still = make_dataset({make_trajectory("a", "u", {{5, 5}, {5, 5}})});
  EXPECT_THROW(select_cell_size(still), Error);
}

TEST(Sweep, EdgesAndShifts) {
  EXPECT_EQ(sweep_edges({100, 300, 50, 1}), (std::vector<double>{100, 150, 200, 250, 300}));
  EXPECT_EQ(sweep_edges({}).size(), 19u);
  const auto shifts = phase_shifts(300.0, 3);
  ASSERT_EQ(shifts.size(), 9u);
  EXPECT_EQ(shifts[4], (GridSpec{300.0, 100.0, 100.0}));
  for (const auto& g : shifts) EXPECT_NO_THROW(g.validate());
  EXPECT_THROW(sweep_edges({500, 100, 50, 1}), Error);
}

std::vector<SweepMetric> grid_metrics() {
  return {
      {"transition_probabilities",
       [](const DiscretizedDataset& r, const DiscretizedDataset& s) {
         return metrics::transition_probabilities(r, s).value;
       }},
      {"g_rank", [](const DiscretizedDataset& r, const DiscretizedDataset& s) { return metrics::g_rank(r, s).value; }},
      {"i_rank", [](const DiscretizedDataset& r, const DiscretizedDataset& s) { return metrics::i_rank(r, s).value; }},
  };
}

TEST(Sweep, IdenticalPairIsExact) {
  const auto d = testing::city_fixture(30, 2);
  const SweepOptions opts{200, 600, 100, 2};
  const auto rows = stability_sweep(d, d, grid_metrics(), opts);
  ASSERT_EQ(rows.size(), 3u * 5u);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.mean.has_value()) << row.metric << " " << row.edge_m;
    EXPECT_EQ(row.n_offsets, 4u);
    EXPECT_EQ(*row.std, 0.0);
    EXPECT_EQ(*row.mean, row.metric == "g_rank" ? 1.0 : 0.0) << row.metric;
  }
}

TEST(Sweep, FailuresLeaveEmptyCells) {
  const auto d = testing::city_fixture(12, 2);
  std::vector<SweepMetric> ms{{"boom", [](const DiscretizedDataset&, const DiscretizedDataset&) -> double {
                                 throw Error("no");
                               }}};
  const auto rows = stability_sweep(d, d, ms, {100, 100, 50, 2});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].mean.has_value());
  EXPECT_EQ(rows[0].n_failed, 4u);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  EXPECT_EQ(csv.str(), "metric,edge_m,mean,std,n_offsets\nboom,100,,,0\n");
}

// Translating both datasets by whole cells leaves every grid-based score
// unchanged for every phase shift.
TEST(Sweep, TranslationByWholeCells) {
  const auto real = testing::city_fixture(30, 8);
  auto ts = real.trajectories();
  Rng rng = make_rng(4);
  std::normal_distribution<double> noise(0.0, 150.0);
  for (auto& t : ts)
    for (auto& p : t.points) {
      p.point.position.x += noise(rng);
      p.point.position.y += noise(rng);
    }
  const auto syn = real.with_trajectories(ts);
  const double edge = 250.0;
  for (const auto& g : phase_shifts(edge, 2)) {
    const auto base_r = discretize(real, g), base_s = discretize(syn, g);
    for (const int k : {1, 3, -7}) {
      const double shift = k * edge;
      const auto r = discretize(testing::translate(real, shift, -2 * shift), g);
      const auto s = discretize(testing::translate(syn, shift, -2 * shift), g);
      for (const auto& m : grid_metrics()) {
        EXPECT_NEAR(m.evaluate(r, s), m.evaluate(base_r, base_s), 1e-12) << m.name << " k=" << k;
      }
    }
  }
}

}  // namespace
}  // namespace trajeval::grid
