#include "trajeval/generators/generators.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>

#include "trajeval/error.hpp"
#include "trajeval/mobility/io.hpp"

namespace trajeval::generators {

using grid::CellId;
using mobility::Dataset;
using mobility::Trajectory;
using nlohmann::ordered_json;

namespace {

std::string fresh_id(std::size_t i) { return "s" + std::to_string(i); }

}  // namespace

Dataset IdentityBlurrer::blur(const Dataset& q, std::uint64_t) const {
  std::vector<Trajectory> out = q.trajectories();
  for (std::size_t i = 0; i < out.size(); ++i) out[i].traj_id = fresh_id(i);
  return q.with_trajectories(std::move(out));
}

GaussianJitterBlurrer::GaussianJitterBlurrer(double sigma_m, double flip_probability)
    : sigma_m_(sigma_m), flip_probability_(flip_probability) {
  if (!(sigma_m >= 0.0) || !std::isfinite(sigma_m)) throw Error("jitter scale must be non-negative");
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) throw Error("flip probability must lie in [0, 1]");
}

Dataset GaussianJitterBlurrer::blur(const Dataset& q, std::uint64_t seed) const {
  const auto labels = q.vocabulary().size();
  std::vector<Trajectory> out = q.trajectories();
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto rng = make_rng(seed, i);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    out[i].traj_id = fresh_id(i);
    for (auto& p : out[i].points) {
      const double dx = noise(rng), dy = noise(rng);
      if (sigma_m_ > 0.0) {
        p.point.position.x += sigma_m_ * dx;
        p.point.position.y += sigma_m_ * dy;
        p.point.source.reset();
      }
      const double flip = coin(rng);
      if (p.category && labels > 1 && flip < flip_probability_) {
        std::uniform_int_distribution<mobility::CategoryId> other(0, static_cast<mobility::CategoryId>(labels - 2));
        auto c = other(rng);
        if (c >= *p.category) ++c;
        p.category = c;
      }
    }
  }
  return q.with_trajectories(std::move(out));
}

GridSnapBlurrer::GridSnapBlurrer(grid::GridSpec grid) : grid_(grid) { grid_.validate(); }

Dataset GridSnapBlurrer::blur(const Dataset& q, std::uint64_t) const {
  std::vector<Trajectory> out = q.trajectories();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].traj_id = fresh_id(i);
    for (auto& p : out[i].points) {
      const auto snapped = grid_.centroid(grid_.cell_of(p.point.position));
      if (!(snapped == p.point.position)) {
        p.point.position = snapped;
        p.point.source.reset();
      }
    }
  }
  return q.with_trajectories(std::move(out));
}

MarginalResampler::MarginalResampler(grid::GridSpec grid) : grid_(grid) { grid_.validate(); }

void MarginalResampler::fit(const Dataset& train) {
  if (train.empty()) throw Error("cannot fit a resampler on an empty dataset");
  *this = MarginalResampler(grid_);
  metadata_ = train.metadata();
  const auto data = grid::discretize(train, grid_);
  for (const auto& t : data.trajectories) {
    lengths_.push_back(t.size());
    if (step_marginals_.size() < t.size()) step_marginals_.resize(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) {
      step_marginals_[n][t.cells[n]] += 1.0;
      overall_[t.cells[n]] += 1.0;
      if (n > 0) kernel_[t.cells[n - 1]][t.cells[n]] += 1.0;
      if (t.categories[n]) categories_[t.cells[n]][*t.categories[n]] += 1.0;
    }
    start_times_.push_back(t.timestamps.front());
    for (std::size_t n = 1; n < t.size(); ++n) intervals_.push_back(t.timestamps[n] - t.timestamps[n - 1]);
  }
}

CellId MarginalResampler::draw(const Counts& counts, Rng& rng) const {
  double total = 0.0;
  for (const auto& [c, n] : counts) total += n;
  std::uniform_real_distribution<double> u(0.0, total);
  double target = u(rng);
  for (const auto& [c, n] : counts) {
    if (target < n) return c;
    target -= n;
  }
  return counts.rbegin()->first;
}

Dataset MarginalResampler::sample(std::size_t n, std::uint64_t seed) const {
  if (!fitted()) throw Error("resampler used before fit");
  std::vector<Trajectory> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = make_rng(seed, i);
    std::uniform_int_distribution<std::size_t> pick_length(0, lengths_.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_start(0, start_times_.size() - 1);
    std::uniform_real_distribution<double> inside(0.0, 1.0);
    const auto length = lengths_[pick_length(rng)];
    double time = start_times_[pick_start(rng)];
    Trajectory t{fresh_id(i), "u" + std::to_string(i), {}};
    CellId cell = draw(step_marginals_[0], rng);
    for (std::size_t step = 0; step < length; ++step) {
      if (step > 0) {
        auto row = kernel_.find(cell);
        if (row != kernel_.end()) {
          cell = draw(row->second, rng);
        } else if (step < step_marginals_.size() && !step_marginals_[step].empty()) {
          cell = draw(step_marginals_[step], rng);
        } else {
          cell = draw(overall_, rng);
        }
        if (!intervals_.empty()) {
          std::uniform_int_distribution<std::size_t> pick_gap(0, intervals_.size() - 1);
          time += intervals_[pick_gap(rng)];
        }
      }
      mobility::TrajPoint p;
      const double ux = inside(rng), uy = inside(rng);
      p.point.position = {grid_.offset_x + (static_cast<double>(cell.col) + ux) * grid_.cell_edge_m,
                          grid_.offset_y + (static_cast<double>(cell.row) + uy) * grid_.cell_edge_m};
      p.timestamp = time;
      if (auto cats = categories_.find(cell); cats != categories_.end()) {
        double total = 0.0;
        for (const auto& [c, k] : cats->second) total += k;
        double target = std::uniform_real_distribution<double>(0.0, total)(rng);
        for (const auto& [c, k] : cats->second) {
          p.category = c;
          if (target < k) break;
          target -= k;
        }
      }
      t.points.push_back(p);
    }
    out.push_back(std::move(t));
  }
  return Dataset(std::move(out), metadata_);
}

namespace {

ordered_json counts_to_json(const std::map<CellId, double>& counts) {
  auto a = ordered_json::array();
  for (const auto& [c, n] : counts) a.push_back({c.col, c.row, n});
  return a;
}

std::map<CellId, double> counts_from_json(const ordered_json& a) {
  std::map<CellId, double> out;
  for (const auto& e : a) out[{e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>()}] = e.at(2).get<double>();
  return out;
}

}  // namespace

std::string MarginalResampler::to_json() const {
  ordered_json j;
  j["kind"] = "marginal_resampler";
  j["grid"] = {{"cell_edge_m", grid_.cell_edge_m}, {"offset_x", grid_.offset_x}, {"offset_y", grid_.offset_y}};
  j["metadata"] = ordered_json::parse(mobility::metadata_to_json(metadata_));
  j["lengths"] = lengths_;
  j["step_marginals"] = ordered_json::array();
  for (const auto& m : step_marginals_) j["step_marginals"].push_back(counts_to_json(m));
  j["overall"] = counts_to_json(overall_);
  j["kernel"] = ordered_json::array();
  for (const auto& [from, row] : kernel_) j["kernel"].push_back({{from.col, from.row}, counts_to_json(row)});
  j["categories"] = ordered_json::array();
  for (const auto& [cell, cats] : categories_) {
    auto row = ordered_json::array();
    for (const auto& [c, n] : cats) row.push_back({c, n});
    j["categories"].push_back({{cell.col, cell.row}, row});
  }
  j["start_times"] = start_times_;
  j["intervals"] = intervals_;
  return j.dump(2) + "\n";
}

MarginalResampler MarginalResampler::from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    if (j.value("kind", "") != "marginal_resampler") throw Error("not a serialized marginal resampler");
    const auto& g = j.at("grid");
    MarginalResampler m(
        {g.at("cell_edge_m").get<double>(), g.at("offset_x").get<double>(), g.at("offset_y").get<double>()});
    m.metadata_ = mobility::metadata_from_json(j.at("metadata").dump());
    m.lengths_ = j.at("lengths").get<std::vector<std::size_t>>();
    for (const auto& s : j.at("step_marginals")) m.step_marginals_.push_back(counts_from_json(s));
    m.overall_ = counts_from_json(j.at("overall"));
    for (const auto& row : j.at("kernel")) {
      m.kernel_[{row.at(0).at(0).get<std::int64_t>(), row.at(0).at(1).get<std::int64_t>()}] =
          counts_from_json(row.at(1));
    }
    for (const auto& row : j.at("categories")) {
      auto& cats = m.categories_[{row.at(0).at(0).get<std::int64_t>(), row.at(0).at(1).get<std::int64_t>()}];
      for (const auto& e : row.at(1)) cats[e.at(0).get<mobility::CategoryId>()] = e.at(1).get<double>();
    }
    m.start_times_ = j.at("start_times").get<std::vector<double>>();
    m.intervals_ = j.at("intervals").get<std::vector<double>>();
    return m;
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("malformed resampler JSON: ") + e.what());
  }
}

ResamplingBlurrer::ResamplingBlurrer(grid::GridSpec grid) : model_(grid) {}

void ResamplingBlurrer::fit(const Dataset& train) { model_.fit(train); }

Dataset ResamplingBlurrer::blur(const Dataset& q, std::uint64_t seed) const {
  auto sampled = model_.sample(q.size(), seed).trajectories();
  for (std::size_t i = 0; i < sampled.size(); ++i) sampled[i].user_id = q[i].user_id;
  return q.with_trajectories(std::move(sampled));
}

GeneratorParams generator_params_from_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    GeneratorParams p;
    p.kind = j.value("kind", p.kind);
    p.sigma_m = j.value("sigma_m", p.sigma_m);
    p.flip_probability = j.value("flip_probability", p.flip_probability);
    p.cell_edge_m = j.value("cell_edge_m", p.cell_edge_m);
    for (const auto& [key, value] : j.items()) {
      if (key != "kind" && key != "sigma_m" && key != "flip_probability" && key != "cell_edge_m") {
        throw Error("unknown generator parameter '" + key + "'");
      }
    }
    return p;
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("malformed generator JSON: ") + e.what());
  }
}

std::string generator_params_to_json(const GeneratorParams& p) {
  ordered_json j;
  j["kind"] = p.kind;
  j["sigma_m"] = p.sigma_m;
  j["flip_probability"] = p.flip_probability;
  j["cell_edge_m"] = p.cell_edge_m;
  return j.dump(2) + "\n";
}

std::unique_ptr<BlurringModel> make_blurring_model(const GeneratorParams& p) {
  if (p.kind == "identity") return std::make_unique<IdentityBlurrer>();
  if (p.kind == "gaussian_jitter") return std::make_unique<GaussianJitterBlurrer>(p.sigma_m, p.flip_probability);
  if (p.kind == "grid_snap") return std::make_unique<GridSnapBlurrer>(grid::GridSpec{p.cell_edge_m, 0.0, 0.0});
  if (p.kind == "marginal_resampler") return std::make_unique<ResamplingBlurrer>(grid::GridSpec{p.cell_edge_m, 0.0, 0.0});
  throw Error("unknown generator '" + p.kind +
              "' (identity, gaussian_jitter, grid_snap, marginal_resampler)");
}

BlurringFactory blurring_factory(const GeneratorParams& params) {
  make_blurring_model(params);
  return [params] { return make_blurring_model(params); };
}

}  // namespace trajeval::generators
