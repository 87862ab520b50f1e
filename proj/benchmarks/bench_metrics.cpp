#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/transition.hpp"
#include "trajeval/mobility/types.hpp"
#include "trajeval/random.hpp"

namespace trajeval {
namespace {

// Random walks with 200 m steps inside a square of `span_m`.
mobility::Dataset walks(std::size_t n, double span_m, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> start(0.0, span_m);
  std::normal_distribution<double> step(0.0, 200.0);
  std::vector<mobility::Trajectory> ts;
  for (std::size_t k = 0; k < n; ++k) {
    mobility::Trajectory t{"t" + std::to_string(k), "u" + std::to_string(k % 50), {}};
    Point2 p{start(rng), start(rng)};
    for (int i = 0; i < 20; ++i) {
      mobility::TrajPoint tp;
      tp.point.position = p;
      tp.timestamp = 60.0 * i;
      t.points.push_back(tp);
      p.x += step(rng);
      p.y += step(rng);
    }
    ts.push_back(std::move(t));
  }
  return mobility::Dataset(std::move(ts), {"walks", mobility::Crs::metric(), {}});
}

void BM_Discretize(benchmark::State& state) {
  const auto d = walks(static_cast<std::size_t>(state.range(0)), 20000.0, 1);
  const grid::GridSpec g{250.0, 40.0, 80.0};
  for (auto _ : state) benchmark::DoNotOptimize(grid::discretize(d, g).transition_count());
  state.SetItemsProcessed(state.iterations() * state.range(0) * 20);
}
BENCHMARK(BM_Discretize)->Arg(1000)->Arg(10000);

void BM_TransitionMetric(benchmark::State& state) {
  const grid::GridSpec g{500.0};
  const auto real = grid::discretize(walks(static_cast<std::size_t>(state.range(0)), 10000.0, 2), g);
  const auto syn = grid::discretize(walks(static_cast<std::size_t>(state.range(0)), 10000.0, 3), g);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::transition_probabilities(real, syn).value);
}
BENCHMARK(BM_TransitionMetric)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace trajeval
