// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "trajeval/app.hpp"
#include "trajeval/framework/report.hpp"
#include "trajeval/framework/sweep.hpp"
#include "trajeval/generators/generators.hpp"
#include "trajeval/grid/grid.hpp"
#include "trajeval/measures/kendall.hpp"
#include "trajeval/measures/trajectory_distance.hpp"
#include "trajeval/measures/wasserstein.hpp"
#include "trajeval/metrics/realism.hpp"
#include "trajeval/metrics/registry.hpp"
#include "trajeval/metrics/tasks.hpp"
#include "trajeval/metrics/transition.hpp"
#include "trajeval/mobility/io.hpp"
#include "trajeval/privacy/mia.hpp"
#include "trajeval/privacy/tul.hpp"
#include "trajeval/random.hpp"
#include "trajeval/stats.hpp"

namespace fs = std::filesystem;
using namespace trajeval;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

std::vector<double> random_masses(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  for (auto& x : w) x /= total;
  return w;
}

std::vector<Point2> random_path(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Point2> p(n);
  for (auto& x : p) x = {u(rng), u(rng)};
  return p;
}

mobility::Dataset random_walks(std::uint64_t seed, std::size_t n, int span) {
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> cell(0, span - 1);
  std::uniform_int_distribution<int> len(2, 7);
  std::vector<mobility::Trajectory> ts;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<testing::XY> xy;
    const int l = len(rng);
    for (int i = 0; i < l; ++i) xy.emplace_back(cell(rng) * 100.0 + 50.0, cell(rng) * 100.0 + 50.0);
    ts.push_back(testing::make_trajectory(fmt::format("w{}", k), fmt::format("u{}", k % 4), xy));
  }
  return testing::make_dataset(ts);
}

// ---- 1 ----------------------------------------------------------------------

Outcome identity_rows() {
  Outcome o;
  const auto dir = testing::scratch_dir("acceptance-identity");
  const auto data = testing::city_fixture(60, 7);
  const auto csv = testing::write_fixture(data, dir, "city").string();
  testing::write_city_layers(dir / "layers");
  const auto loaded = mobility::load_dataset(csv);
  const auto layers = metrics::load_constraint_layers(dir / "layers", loaded.metadata().crs);

  for (const std::string preset : {"use-case-a", "use-case-b"}) {
    const auto start = Clock::now();
    const auto out_dir = dir / preset;
    std::ostringstream out, err;
    const int code = cli::run({"evaluate", "--dataset", csv, "--syn", csv, "--preset", preset, "--layers",
                               (dir / "layers").string(), "--format", "json", "--out", out_dir.string()},
                              out, err);
    const double elapsed = seconds_since(start);
    require(o, code == 0, fmt::format("{} exit {} ({})", preset, code, err.str()));
    if (code != 0) continue;
    std::ifstream in(out_dir / "report.json");
    std::stringstream text;
    text << in.rdbuf();
    const auto report = framework::report_from_json(text.str());
    require(o, report.original.has_value(), preset + " has no original row");
    require(o, elapsed < 60.0, fmt::format("{} took {:.1f} s", preset, elapsed));
    std::size_t checked = 0;
    for (const auto& e : report.original->entries) {
      if (e.status != metrics::Status::Ok) {
        require(o, false, fmt::format("{} {} is {}", preset, e.metric, metrics::to_string(e.status)));
        continue;
      }
      const double v = *e.value;
      if (e.unit.rfind("W1", 0) == 0) {
        require(o, std::abs(v) <= 1e-9, fmt::format("{} {} = {}", preset, e.metric, v));
        ++checked;
      } else if (e.unit == "tau_b") {
        require(o, v == 1.0, fmt::format("{} {} = {}", preset, e.metric, v));
        ++checked;
      } else if (e.metric == "category_location_match") {
        require(o, v == 1.0, fmt::format("{} {} = {}", preset, e.metric, v));
        ++checked;
      } else if (e.metric == "trajectory_implausibility") {
        const double direct = metrics::trajectory_implausibility(loaded, layers).value;
        require(o, v == direct, fmt::format("{} {} = {} vs {}", preset, e.metric, v, direct));
        require(o, direct > 0.0, "fixture has no implausible trajectory");
        ++checked;
      } else if (e.metric == "location_implausibility") {
        const double direct = metrics::location_implausibility(loaded, layers).value;
        require(o, v == direct, fmt::format("{} {} = {} vs {}", preset, e.metric, v, direct));
        ++checked;
      }
    }
    o.detail += (o.detail.empty() ? "" : ", ") + fmt::format("{}: {} entries checked in {:.1f} s", preset, checked, elapsed);
  }
  fs::remove_all(dir);
  return o;
}

// ---- 2 ----------------------------------------------------------------------

Outcome transport_oracle() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng = make_rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  std::uniform_int_distribution<int> coord(0, 8);
  std::uniform_real_distribution<double> x(-5.0, 5.0);
  double worst_ground = 0.0, worst_scalar = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<grid::CellId> a(size(rng)), b(size(rng));
    for (auto& c : a) c = {coord(rng), coord(rng)};
    for (auto& c : b) c = {coord(rng), coord(rng)};
    const auto mu = measures::CellDistribution::from_weights(a, random_masses(a.size(), rng));
    const auto nu = measures::CellDistribution::from_weights(b, random_masses(b.size(), rng));
    const auto cost = measures::spatial_ground_cost(mu.support(), nu.support(), 100.0);
    measures::CostMatrix dense(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < nu.size(); ++j)
        dense(i, j) = cost(cost.row_index(mu.support()[i]), cost.col_index(nu.support()[j]));
    const double got = measures::wasserstein1_ground_cost(mu, nu, cost);
    const double want = testing::transport_by_vertex_enumeration(mu.weights(), nu.weights(), dense);
    worst_ground = std::max(worst_ground, std::abs(got - want));

    std::vector<double> sa(size(rng)), sb(size(rng));
    for (auto& v : sa) v = x(rng);
    for (auto& v : sb) v = x(rng);
    const auto smu = measures::ScalarDistribution::from_weights(sa, random_masses(sa.size(), rng));
    const auto snu = measures::ScalarDistribution::from_weights(sb, random_masses(sb.size(), rng));
    measures::CostMatrix abs_cost(smu.size(), snu.size());
    for (std::size_t i = 0; i < smu.size(); ++i)
      for (std::size_t j = 0; j < snu.size(); ++j) abs_cost(i, j) = std::abs(smu.support()[i] - snu.support()[j]);
    const double scalar = measures::wasserstein1_scalar(smu, snu);
    const double lp = measures::solve_transport(smu.weights(), snu.weights(), abs_cost).cost;
    const double vertex = testing::transport_by_vertex_enumeration(smu.weights(), snu.weights(), abs_cost);
    worst_scalar = std::max({worst_scalar, std::abs(scalar - lp), std::abs(scalar - vertex)});
  }
  const double elapsed = seconds_since(start);
  require(o, worst_ground <= 1e-9, fmt::format("ground-cost error {:.3g}", worst_ground));
  require(o, worst_scalar <= 1e-9, fmt::format("scalar error {:.3g}", worst_scalar));
  require(o, elapsed < 30.0, fmt::format("took {:.1f} s", elapsed));
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("500 instances, max error ground {:.2g} scalar {:.2g}, {:.2f} s", worst_ground,
                          worst_scalar, elapsed);
  return o;
}

// ---- 3 ----------------------------------------------------------------------

Outcome rank_and_distance_oracles() {
  Outcome o;
  Rng rng = make_rng(77);
  std::uniform_int_distribution<int> items(2, 25), freq(1, 5), coin(0, 3);
  std::size_t tau_checked = 0, tau_mismatch = 0;
  while (tau_checked < 500) {
    // Frequencies with ties over partially overlapping item sets.
    std::map<std::string, double> fx, fy;
    const int n = items(rng);
    for (int i = 0; i < n; ++i) {
      const auto key = fmt::format("c{}", i);
      const int side = coin(rng);
      if (side != 1) fx[key] = freq(rng);
      if (side != 2) fy[key] = freq(rng);
    }
    if (fx.empty() || fy.empty()) continue;
    const auto rx = measures::RankVector<std::string>::from_frequencies(fx);
    const auto ry = measures::RankVector<std::string>::from_frequencies(fy);
    std::map<std::string, double> ox, oy;
    for (std::size_t i = 0; i < rx.items.size(); ++i) ox[rx.items[i]] = rx.ranks[i];
    for (std::size_t i = 0; i < ry.items.size(); ++i) oy[ry.items[i]] = ry.ranks[i];
    const double want = testing::tau_b_partial(ox, oy);
    if (!std::isfinite(want)) continue;  // an entirely tied side has no tau-b
    double got = 0.0;
    try {
      got = measures::kendall_tau_b(rx, ry);
    } catch (const std::exception&) {
      got = std::nan("");
    }
    ++tau_checked;
    if (got != want) ++tau_mismatch;
  }
  require(o, tau_mismatch == 0, fmt::format("{} tau-b mismatches", tau_mismatch));

  std::uniform_int_distribution<std::size_t> len(1, 6);
  double worst_frechet = 0.0, worst_dtw = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_path(len(rng), rng), b = random_path(len(rng), rng);
    worst_frechet = std::max(worst_frechet, std::abs(measures::discrete_frechet(a, b) - testing::frechet_recursive(a, b)));
    worst_dtw = std::max(worst_dtw, std::abs(measures::dtw(a, b) - testing::dtw_enumerated(a, b)));
  }
  require(o, worst_frechet == 0.0, fmt::format("Frechet error {:.3g}", worst_frechet));
  require(o, worst_dtw <= 1e-9, fmt::format("DTW error {:.3g}", worst_dtw));
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("500 tau-b instances exact, 200 paths: Frechet max error {:.2g}, DTW {:.2g}",
                          worst_frechet, worst_dtw);
  return o;
}

// ---- 4 and 5 ----------------------------------------------------------------

struct MiaBench {
  privacy::AttackPartition part;
};

MiaBench mia_bench() {
  // 150 records per part; lengths 12..16 keep every same-length bucket populated.
  return {privacy::partition_for_attack(testing::checkin_fixture(600, 42), {0.25, 0.25, 0.25, 0.25}, 1)};
}

privacy::TargetSetup setup_for(const MiaBench& b, const generators::GeneratorParams& p) {
  return {b.part.d_train, b.part.q_target, b.part.held_out, generators::blurring_factory(p)};
}

privacy::AttackConfig mia_config(privacy::Scenario s, std::size_t seeds) {
  privacy::AttackConfig cfg;
  cfg.scenario = s;
  cfg.seeds = seeds;
  cfg.seed = 11;
  cfg.targets_per_class = 100;
  if (s == privacy::Scenario::Masked) cfg.keep_fraction = 0.25;
  return cfg;
}

Outcome mia_extremes() {
  Outcome o;
  const auto bench = mia_bench();
  generators::GeneratorParams identity;
  identity.kind = "identity";
  for (const auto scenario : {privacy::Scenario::Main, privacy::Scenario::Masked, privacy::Scenario::ReleasedOnly}) {
    const auto start = Clock::now();
    const auto cfg = mia_config(scenario, 1);
    const auto r = privacy::run_attack(setup_for(bench, identity),
                                       scenario == privacy::Scenario::ReleasedOnly ? nullptr : &bench.part.d_aux, cfg);
    const double elapsed = seconds_since(start);
    require(o, r.accuracy >= 0.95, fmt::format("identity {} accuracy {:.3f}", privacy::to_string(scenario), r.accuracy));
    require(o, elapsed < 120.0, fmt::format("{} took {:.1f} s", privacy::to_string(scenario), elapsed));
    o.detail += fmt::format("identity {} {:.3f} over {} targets ({:.1f} s); ", privacy::to_string(scenario),
                            r.accuracy, r.decisions.size(), elapsed);
  }

  generators::GeneratorParams resampler;
  resampler.kind = "marginal_resampler";
  resampler.cell_edge_m = 500.0;
  const auto start = Clock::now();
  const auto r = privacy::run_attack(setup_for(bench, resampler), &bench.part.d_aux, mia_config(privacy::Scenario::Main, 4));
  const double elapsed = seconds_since(start);
  const double n = static_cast<double>(r.decisions.size());
  const double half_width = 1.959963984540054 * std::sqrt(0.25 / n);
  require(o, n >= 200.0, "fewer than 200 targets");
  require(o, std::abs(r.accuracy - 0.5) <= half_width,
          fmt::format("resampler accuracy {:.3f} outside 0.5 +- {:.3f}", r.accuracy, half_width));
  require(o, elapsed < 120.0, fmt::format("resampler took {:.1f} s", elapsed));
  o.detail += fmt::format("resampler {:.3f} over {} targets, 95% CI [{:.3f}, {:.3f}] ({:.1f} s); ", r.accuracy,
                          r.decisions.size(), 0.5 - half_width, 0.5 + half_width, elapsed);

  const auto tm = privacy::threshold_from_scores({2.0}, {4.0}, privacy::DistanceKind::Frechet);
  require(o, tm.tau == 3.0, fmt::format("tau(2, 4) = {}", tm.tau));
  o.detail += fmt::format("tau(2, 4) = {}", tm.tau);
  return o;
}

Outcome jitter_monotonicity() {
  Outcome o;
  const auto bench = mia_bench();
  std::vector<double> member_alpha, accuracy;
  for (const double sigma : {1.0, 50.0, 5000.0}) {
    generators::GeneratorParams p;
    p.kind = "gaussian_jitter";
    p.sigma_m = sigma;
    const auto r = privacy::run_attack(setup_for(bench, p), &bench.part.d_aux, mia_config(privacy::Scenario::Main, 4));
    std::vector<double> alphas;
    for (const auto& d : r.decisions)
      if (d.member && d.scored) alphas.push_back(d.alpha);
    member_alpha.push_back(stats::mean(alphas));
    accuracy.push_back(r.accuracy);
    o.detail += fmt::format("sigma {} m: accuracy {}, mean member alpha {:.1f} m; ", sigma,
                            privacy::mean_pm_std(r.mean, r.std_dev), member_alpha.back());
  }
  require(o, member_alpha[0] < member_alpha[1] && member_alpha[1] < member_alpha[2],
          "mean member alpha is not strictly increasing");
  require(o, accuracy[0] > accuracy[2], "accuracy at 1 m does not exceed accuracy at 5 km");
  return o;
}

// ---- 6 ----------------------------------------------------------------------

Outcome tul_gap() {
  Outcome o;
  // Neighbouring homes sit about 310 m apart, so linking is far from saturated.
  const auto d = testing::tul_fixture(60, 6, 300.0, 5);
  const auto split = privacy::split_for_tul(d, 2.0 / 3.0, 3);
  const privacy::TulSolverFactory solver = [] { return std::make_unique<privacy::NearestTraceSolver>(); };
  auto gaps = [&](generators::BlurringModel& model) {
    model.fit(split.d_train);
    const auto s_train = model.blur(split.d_train, 101);
    const auto s_target = model.blur(split.q_target, 102);
    return privacy::tul_protocols(split.d_train, split.q_target, s_train, s_target, solver);
  };
  generators::IdentityBlurrer identity;
  const auto id = gaps(identity);
  for (const auto& r : id)
    require(o, std::abs(r.gap_pp) <= 1.0, fmt::format("identity {} gap {:.2f} pp", privacy::to_string(r.protocol), r.gap_pp));
  generators::GaussianJitterBlurrer jitter(50.0, 0.0);
  const auto j = gaps(jitter);
  require(o, j[0].gap_pp >= j[1].gap_pp,
          fmt::format("jitter legacy gap {:.2f} pp < fixed gap {:.2f} pp", j[0].gap_pp, j[1].gap_pp));
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("identity gaps {:.1f}/{:.1f} pp, 50 m jitter legacy {:.1f} pp vs fixed {:.1f} pp "
                          "(real accuracy {:.3f})",
                          id[0].gap_pp, id[1].gap_pp, j[0].gap_pp, j[1].gap_pp, j[0].real_accuracy);
  return o;
}

// ---- 7 ----------------------------------------------------------------------

Outcome grid_invariances() {
  Outcome o;
  const auto real = testing::city_fixture(60, 8);
  const auto syn = generators::GaussianJitterBlurrer(150.0, 0.0).blur(real, 4);
  double worst = 0.0;
  for (const double edge : {200.0, 350.0}) {
    for (const auto& g : grid::phase_shifts(edge, 3)) {
      const double base = metrics::transition_probabilities(grid::discretize(real, g), grid::discretize(syn, g)).value;
      for (const int k : {1, 4, -9, 250}) {
        const double dx = k * edge, dy = -3 * k * edge;
        const double moved = metrics::transition_probabilities(grid::discretize(testing::translate(real, dx, dy), g),
                                                               grid::discretize(testing::translate(syn, dx, dy), g))
                                 .value;
        worst = std::max(worst, std::abs(moved - base));
      }
    }
  }
  require(o, worst <= 1e-9, fmt::format("translation changes the transition metric by {:.3g}", worst));

  std::vector<std::string> ids;
  std::map<std::string, double> expected;
  for (const auto& m : metrics::metric_registry()) {
    if (!m.implemented() || !m.grid_based || m.needs_layers) continue;
    if (m.unit.rfind("W1", 0) == 0) expected[m.id] = 0.0;
    else if (m.unit == "tau_b") expected[m.id] = 1.0;
    else continue;
    ids.push_back(m.id);
  }
  const auto rows = framework::run_stability_sweep(real, real, ids, {200.0, 800.0, 100.0, 3});
  std::size_t bad = 0;
  for (const auto& r : rows) {
    const bool ok = r.mean && r.std && *r.mean == expected[r.metric] && *r.std == 0.0 && r.n_offsets == 9;
    if (!ok) {
      ++bad;
      require(o, false, fmt::format("{} at {} m", r.metric, r.edge_m));
    }
  }
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("translation max change {:.2g}; sweep on (D, D): {} rows over {} metrics, {} off target",
                          worst, rows.size(), ids.size(), bad);
  return o;
}

// ---- 8 ----------------------------------------------------------------------

Outcome transition_bounds() {
  Outcome o;
  const grid::GridSpec g{100.0};
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = grid::discretize(random_walks(seed, 6, 4), g);
    const auto s = grid::discretize(random_walks(seed + 1000, 6, 6), g);
    const double v = metrics::transition_probabilities(r, s).value;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  require(o, lo >= 0.0 && hi <= 1.0, fmt::format("values in [{}, {}]", lo, hi));

  Rng rng = make_rng(8);
  std::size_t decreases = 0;
  double smallest_change = std::numeric_limits<double>::infinity();
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const auto r = metrics::build_transition_matrix(grid::discretize(random_walks(trial + 2000, 8, 4), g));
    const auto s = metrics::build_transition_matrix(grid::discretize(random_walks(trial + 3000, 8, 4), g));
    std::vector<std::size_t> origins;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!r.rows()[i].empty()) origins.push_back(i);
    const auto origin = r.states()[origins[std::uniform_int_distribution<std::size_t>(0, origins.size() - 1)(rng)]];
    const auto cost = metrics::transition_ground_cost(r, s, 100.0);
    const double before = metrics::transition_probability_metric(r, s, cost).value;
    const double after = metrics::transition_probability_metric(r, s.without_origin(origin), cost).value;
    smallest_change = std::min(smallest_change, after - before);
    if (after < before) ++decreases;
  }
  require(o, decreases == 0, fmt::format("{} deletions decreased D", decreases));
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("200 pairs in [{:.3f}, {:.3f}]; 100 deletions, smallest change {:.3g}", lo, hi,
                          smallest_change);
  return o;
}

// ---- 9 ----------------------------------------------------------------------

Outcome task_fixtures() {
  Outcome o;
  const auto chain = grid::discretize(testing::markov_cycle_fixture(), grid::GridSpec{500.0});
  const auto kernel = metrics::build_transition_matrix(chain);
  const double next = metrics::next_location_prediction(kernel, chain, 10).value;
  const double flow = metrics::global_flow_prediction(kernel, chain).value;
  require(o, next == 1.0, fmt::format("next location {}", next));
  require(o, flow == 0.0, fmt::format("global flow {}", flow));

  const std::vector<Point2> pts{{0, 0}, {1, 0}, {10, 0}, {11, 0}};
  const double hand = (2 * (1 - 1 / 10.5) + 2 * (1 - 1 / 9.5)) / 4;
  const double got = metrics::mean_silhouette(pts, {0, 0, 1, 1});
  require(o, std::abs(got - hand) <= 1e-12, fmt::format("silhouette {} vs hand value {}", got, hand));
  const auto clusters = testing::two_cluster_fixture(20, 50000.0);
  const double sil = metrics::trajectory_clustering(clusters, clusters).value;
  require(o, sil > 0.9, fmt::format("two-cluster silhouette {}", sil));
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt::format("next location {:.3f}, global flow {:.3g}, silhouette {:.3f} (hand case {:.6f})", next, flow,
                          sil, got);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity rows reproduce the original row pattern", identity_rows},
      {"optimal transport matches the vertex oracle", transport_oracle},
      {"tau-b, Frechet and DTW match their oracles", rank_and_distance_oracles},
      {"membership inference extremes and threshold formula", mia_extremes},
      {"jitter monotonicity of member scores and accuracy", jitter_monotonicity},
      {"TUL protocol gap", tul_gap},
      {"grid translation invariance and identity sweep", grid_invariances},
      {"transition metric bounds and origin deletion", transition_bounds},
      {"task metric fixtures", task_fixtures},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(start), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
