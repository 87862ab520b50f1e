#include "trajeval/grid/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <set>
#include <unordered_set>

#include "trajeval/error.hpp"
#include "trajeval/parallel.hpp"
#include "trajeval/stats.hpp"

namespace trajeval::grid {

void GridSpec::validate() const {
  if (!(cell_edge_m > 0.0) || !std::isfinite(cell_edge_m)) throw Error("cell edge must be positive");
  if (!(offset_x >= 0.0 && offset_x < cell_edge_m) || !(offset_y >= 0.0 && offset_y < cell_edge_m)) {
    throw Error("grid offsets must lie in [0, cell edge)");
  }
}

CellId GridSpec::cell_of(const Point2& p) const {
  return {static_cast<std::int64_t>(std::floor((p.x - offset_x) / cell_edge_m)),
          static_cast<std::int64_t>(std::floor((p.y - offset_y) / cell_edge_m))};
}

Point2 GridSpec::centroid(const CellId& c) const {
  return {offset_x + (static_cast<double>(c.col) + 0.5) * cell_edge_m,
          offset_y + (static_cast<double>(c.row) + 0.5) * cell_edge_m};
}

std::size_t DiscretizedDataset::transition_count() const {
  std::size_t n = 0;
  for (const auto& t : trajectories) n += t.size() > 0 ? t.size() - 1 : 0;
  return n;
}

DiscretizedDataset discretize(const mobility::Dataset& dataset, const GridSpec& grid) {
  grid.validate();
  DiscretizedDataset out;
  out.grid = grid;
  out.vocabulary = dataset.vocabulary();
  out.trajectories.reserve(dataset.size());
  for (const auto& t : dataset.trajectories()) {
    DiscretizedTrajectory d;
    d.traj_id = t.traj_id;
    d.user_id = t.user_id;
    d.cells.reserve(t.size());
    d.timestamps.reserve(t.size());
    d.categories.reserve(t.size());
    for (const auto& p : t.points) {
      d.cells.push_back(grid.cell_of(p.point.position));
      d.timestamps.push_back(p.timestamp);
      d.categories.push_back(p.category);
    }
    out.trajectories.push_back(std::move(d));
  }
  return out;
}

GridDiagnostics grid_diagnostics(const DiscretizedDataset& data) {
  std::set<std::pair<CellId, CellId>> distinct;
  std::unordered_set<CellId, CellIdHash> visited;
  std::size_t transitions = 0, self = 0;
  auto lo = CellId{std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max()};
  auto hi = CellId{std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::min()};
  for (const auto& t : data.trajectories) {
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      const auto& c = t.cells[i];
      visited.insert(c);
      lo = {std::min(lo.col, c.col), std::min(lo.row, c.row)};
      hi = {std::max(hi.col, c.col), std::max(hi.row, c.row)};
      if (i == 0) continue;
      ++transitions;
      if (t.cells[i - 1] == c) ++self;
      distinct.emplace(t.cells[i - 1], c);
    }
  }
  if (transitions == 0) throw Error("grid diagnostics need at least one transition");
  const double box = static_cast<double>(hi.col - lo.col + 1) * static_cast<double>(hi.row - lo.row + 1);
  return {static_cast<double>(distinct.size()) / static_cast<double>(transitions),
          static_cast<double>(self) / static_cast<double>(transitions),
          static_cast<double>(visited.size()) / box};
}

std::vector<double> segment_lengths(const mobility::Dataset& dataset) {
  std::vector<double> out;
  for (const auto& t : dataset.trajectories()) {
    for (std::size_t i = 1; i < t.size(); ++i) {
      out.push_back(distance(t.points[i - 1].point.position, t.points[i].point.position));
    }
  }
  return out;
}

double find_elbow(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw Error("elbow search needs matching non-empty samples");
  if (x.size() < 3) return (x.front() + x.back()) / 2.0;
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double xspan = x.back() - x.front();
  const double yspan = *ymax - *ymin;
  if (xspan == 0.0 || yspan == 0.0) return (x.front() + x.back()) / 2.0;
  auto nx = [&](std::size_t i) { return (x[i] - x.front()) / xspan; };
  auto ny = [&](std::size_t i) { return (y[i] - *ymin) / yspan; };
  const double y0 = ny(0), y1 = ny(x.size() - 1);
  double best = 0.0;
  std::optional<std::size_t> best_index;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double chord = y0 + (y1 - y0) * nx(i);
    const double gap = std::abs(ny(i) - chord);
    if (gap > best + 1e-12) {
      best = gap;
      best_index = i;
    }
  }
  return best_index ? x[*best_index] : (x.front() + x.back()) / 2.0;
}

double consensus_edge(const std::vector<double>& candidates) {
  if (candidates.empty()) throw Error("no elbow candidates");
  const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
  return (*lo + *hi) / 2.0;
}

namespace {

std::vector<double> candidate_edges(double lo, double hi, const CellSizeOptions& options) {
  std::vector<double> edges;
  for (double e = std::ceil(lo / options.step_m) * options.step_m; e <= hi + 1e-9; e += options.step_m) {
    if (e > 0.0) edges.push_back(e);
  }
  if (edges.size() < options.min_candidates) {
    edges.clear();
    const auto n = options.min_candidates;
    for (std::size_t i = 0; i < n; ++i) {
      edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  return edges;
}

}  // namespace

CellSizeSelection select_cell_size(const mobility::Dataset& dataset, const CellSizeOptions& options) {
  if (!(options.step_m > 0.0) || options.min_candidates < 2) throw Error("invalid cell size options");
  auto segments = segment_lengths(dataset);
  if (segments.empty()) throw Error("cell size selection needs trajectories with at least two points");
  CellSizeSelection result;
  result.p10_m = stats::percentile(segments, 10.0);
  result.p50_m = stats::percentile(segments, 50.0);
  if (!(result.p50_m > result.p10_m)) {
    result.edge_m = result.p10_m;
    result.warning = fmt::format("degenerate segment distribution: P10 = P50 = {} m", result.p10_m);
    if (!(result.edge_m > 0.0)) throw Error("segment lengths are all zero; cannot choose a cell size");
    return result;
  }
  result.candidates = candidate_edges(result.p10_m, result.p50_m, options);
  std::array<std::vector<double>, 3> curves;
  for (double edge : result.candidates) {
    const auto diag = grid_diagnostics(discretize(dataset, GridSpec{edge, 0.0, 0.0}));
    result.diagnostics.push_back(diag);
    curves[0].push_back(diag.unique_transition_fraction);
    curves[1].push_back(diag.self_transition_fraction);
    curves[2].push_back(diag.occupancy_ratio);
  }
  for (std::size_t k = 0; k < 3; ++k) result.elbows[k] = find_elbow(result.candidates, curves[k]);
  result.edge_m = consensus_edge({result.elbows.begin(), result.elbows.end()});
  return result;
}

std::vector<double> sweep_edges(const SweepOptions& options) {
  if (!(options.step_m > 0.0) || !(options.min_edge_m > 0.0) || options.max_edge_m < options.min_edge_m) {
    throw Error("invalid sweep edge range");
  }
  std::vector<double> edges;
  const auto steps = static_cast<std::size_t>(std::floor((options.max_edge_m - options.min_edge_m) / options.step_m + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) edges.push_back(options.min_edge_m + static_cast<double>(i) * options.step_m);
  return edges;
}

std::vector<GridSpec> phase_shifts(double edge_m, std::size_t offsets_per_axis) {
  if (offsets_per_axis == 0) throw Error("at least one offset per axis is required");
  std::vector<GridSpec> grids;
  const double step = edge_m / static_cast<double>(offsets_per_axis);
  for (std::size_t i = 0; i < offsets_per_axis; ++i) {
    for (std::size_t j = 0; j < offsets_per_axis; ++j) {
      grids.push_back({edge_m, static_cast<double>(i) * step, static_cast<double>(j) * step});
    }
  }
  return grids;
}

std::vector<SweepRow> stability_sweep(const mobility::Dataset& real, const mobility::Dataset& syn,
                                      const std::vector<SweepMetric>& metrics, const SweepOptions& options) {
  if (real.metadata().crs != syn.metadata().crs) throw Error("stability sweep needs datasets in the same CRS");
  const auto edges = sweep_edges(options);
  std::vector<GridSpec> configs;
  for (double e : edges) {
    for (const auto& g : phase_shifts(e, options.offsets_per_axis)) configs.push_back(g);
  }
  // values[config][metric]
  std::vector<std::vector<std::optional<double>>> values(configs.size(),
                                                         std::vector<std::optional<double>>(metrics.size()));
  parallel_for(configs.size(), [&](std::size_t c) {
    const auto dr = discretize(real, configs[c]);
    const auto ds = discretize(syn, configs[c]);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      try {
        const double v = metrics[m].evaluate(dr, ds);
        if (std::isfinite(v)) values[c][m] = v;
      } catch (const std::exception&) {
      }
    }
  });
  const std::size_t per_edge = options.offsets_per_axis * options.offsets_per_axis;
  std::vector<SweepRow> rows;
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      SweepRow row;
      row.metric = metrics[m].name;
      row.edge_m = edges[e];
      std::vector<double> ok;
      for (std::size_t k = 0; k < per_edge; ++k) {
        if (const auto& v = values[e * per_edge + k][m]) ok.push_back(*v);
      }
      row.n_offsets = ok.size();
      row.n_failed = per_edge - ok.size();
      if (!ok.empty()) {
        row.mean = stats::mean(ok);
        row.std = stats::stddev(ok);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "metric,edge_m,mean,std,n_offsets\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{}\n", r.metric, r.edge_m, r.mean ? fmt::format("{:.6f}", *r.mean) : "",
                       r.std ? fmt::format("{:.6f}", *r.std) : "", r.n_offsets);
  }
}

}  // namespace trajeval::grid
