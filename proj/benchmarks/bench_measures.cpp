#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>

#include "trajeval/measures/kendall.hpp"
#include "trajeval/measures/trajectory_distance.hpp"
#include "trajeval/measures/transport.hpp"
#include "trajeval/random.hpp"

namespace trajeval::measures {
namespace {

std::vector<double> masses(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  for (auto& x : w) x /= total;
  return w;
}

void BM_Transport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(1);
  const auto supply = masses(n, rng), demand = masses(n, rng);
  std::uniform_real_distribution<double> c(0.0, 1.0);
  CostMatrix cost(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = c(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_transport(supply, demand, cost).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Transport)->RangeMultiplier(2)->Range(8, 256)->Complexity();

void BM_KendallTauB(benchmark::State& state) {
  Rng rng = make_rng(2);
  std::uniform_int_distribution<int> f(1, 50);
  std::map<int, double> x, y;
  for (int i = 0; i < state.range(0); ++i) {
    x[i] = f(rng);
    y[i] = f(rng);
  }
  const auto rx = RankVector<int>::from_frequencies(x), ry = RankVector<int>::from_frequencies(y);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_b(rx, ry));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTauB)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oNLogN);

std::vector<Point2> path(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 5000.0);
  std::vector<Point2> p(n);
  for (auto& q : p) q = {u(rng), u(rng)};
  return p;
}

void BM_Frechet(benchmark::State& state) {
  Rng rng = make_rng(3);
  const auto a = path(static_cast<std::size_t>(state.range(0)), rng), b = path(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(discrete_frechet(a, b));
}
BENCHMARK(BM_Frechet)->Arg(16)->Arg(64)->Arg(256);

void BM_Dtw(benchmark::State& state) {
  Rng rng = make_rng(4);
  const auto a = path(static_cast<std::size_t>(state.range(0)), rng), b = path(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(dtw(a, b));
}
BENCHMARK(BM_Dtw)->Arg(16)->Arg(64)->Arg(256);

}  // namespace
}  // namespace trajeval::measures
