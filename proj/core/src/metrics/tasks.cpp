#include "trajeval/metrics/tasks.hpp"

#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <cmath>
#include <map>
#include <set>

#include "trajeval/measures/wasserstein.hpp"
#include "trajeval/stats.hpp"

namespace trajeval::metrics {

using grid::CellId;

std::vector<CellId> top_k_next(const TransitionMatrix& model, const CellId& current, std::size_t k) {
  std::vector<CellId> out;
  const auto i = model.index_of(current);
  if (i && !model.rows()[*i].empty()) {
    auto row = model.rows()[*i];
    std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    for (std::size_t r = 0; r < row.size() && out.size() < k; ++r) out.push_back(model.states()[row[r].first]);
    return out;
  }
  for (std::size_t s = 0; s < model.size() && out.size() < k; ++s) out.push_back(model.states()[s]);
  return out;
}

MetricValue next_location_prediction(const TransitionMatrix& syn_model, const grid::DiscretizedDataset& real,
                                     std::size_t k) {
  if (k == 0) throw Error("top-k prediction needs k >= 1");
  std::vector<double> accuracies;
  MetricValue out;
  for (const auto& t : real.trajectories) {
    if (t.size() < 2) {
      ++out.excluded;
      continue;
    }
    std::size_t hits = 0;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
      const auto candidates = top_k_next(syn_model, t.cells[n], k);
      if (std::find(candidates.begin(), candidates.end(), t.cells[n + 1]) != candidates.end()) ++hits;
    }
    accuracies.push_back(static_cast<double>(hits) / static_cast<double>(t.size() - 1));
  }
  if (accuracies.empty()) throw Inapplicable("no real trajectory has a transition");
  out.value = stats::mean(accuracies);
  return out;
}

std::vector<measures::CellDistribution> positional_distributions(const grid::DiscretizedDataset& data) {
  std::vector<std::map<CellId, double>> counts;
  for (const auto& t : data.trajectories) {
    if (counts.size() < t.size()) counts.resize(t.size());
    for (std::size_t n = 0; n < t.size(); ++n) counts[n][t.cells[n]] += 1.0;
  }
  std::vector<measures::CellDistribution> out;
  for (const auto& c : counts) {
    std::vector<CellId> support;
    std::vector<double> weights;
    for (const auto& [cell, n] : c) {
      support.push_back(cell);
      weights.push_back(n);
    }
    out.push_back(measures::CellDistribution::from_weights(std::move(support), std::move(weights)));
  }
  return out;
}

measures::CellDistribution propagate(const measures::CellDistribution& v, const TransitionMatrix& model) {
  if (model.size() == 0) throw Error("propagation through an empty transition matrix");
  std::map<CellId, double> next;
  const double uniform = 1.0 / static_cast<double>(model.size());
  for (std::size_t a = 0; a < v.size(); ++a) {
    const double w = v.weights()[a];
    const auto i = model.index_of(v.support()[a]);
    if (i && !model.rows()[*i].empty()) {
      for (const auto& [j, p] : model.rows()[*i]) next[model.states()[j]] += w * p;
    } else {
      for (const auto& s : model.states()) next[s] += w * uniform;
    }
  }
  std::vector<CellId> support;
  std::vector<double> weights;
  for (const auto& [cell, w] : next) {
    support.push_back(cell);
    weights.push_back(w);
  }
  return measures::CellDistribution::from_weights(std::move(support), std::move(weights));
}

MetricValue global_flow_prediction(const TransitionMatrix& syn_model, const grid::DiscretizedDataset& real) {
  std::vector<double> lengths;
  std::vector<CellId> cells = syn_model.states();
  for (const auto& t : real.trajectories) {
    lengths.push_back(static_cast<double>(t.size()));
    cells.insert(cells.end(), t.cells.begin(), t.cells.end());
  }
  if (lengths.empty()) throw Error("global flow prediction on an empty dataset");
  const auto horizon = static_cast<std::size_t>(std::floor(stats::percentile(lengths, 90.0)));
  if (horizon < 2) throw Inapplicable("trajectories too short for flow prediction");
  const auto positions = positional_distributions(real);
  const measures::CellGroundCost cost(cells, real.grid.cell_edge_m);
  std::vector<double> errors;
  for (std::size_t n = 0; n + 1 < horizon && n + 1 < positions.size(); ++n) {
    errors.push_back(measures::wasserstein1_cells(propagate(positions[n], syn_model), positions[n + 1], cost));
  }
  return {stats::mean(errors), 0, {}};
}

namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;
using BPoint = bg::model::d2::point_xy<double>;
using BBox = bg::model::box<BPoint>;
using Entry = std::pair<BPoint, std::size_t>;
using Tree = bgi::rtree<Entry, bgi::quadratic<16>>;

Tree index_points(const std::vector<Point2>& points) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < points.size(); ++i) entries.emplace_back(BPoint(points[i].x, points[i].y), i);
  return Tree(entries);
}

std::vector<std::size_t> neighbours(const Tree& tree, const std::vector<Point2>& points, std::size_t i, double eps) {
  const auto& p = points[i];
  std::vector<std::size_t> out;
  const BBox box(BPoint(p.x - eps, p.y - eps), BPoint(p.x + eps, p.y + eps));
  for (auto it = tree.qbegin(bgi::intersects(box)); it != tree.qend(); ++it) {
    if (distance(p, points[it->second]) <= eps) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Clustering dbscan(const std::vector<Point2>& points, const ClusterOptions& options) {
  if (!(options.eps_m > 0.0) || options.min_points == 0) throw Error("invalid clustering parameters");
  const auto tree = index_points(points);
  Clustering c;
  c.labels.assign(points.size(), -1);
  c.core.assign(points.size(), false);
  std::vector<std::vector<std::size_t>> nbrs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    nbrs[i] = neighbours(tree, points, i, options.eps_m);
    c.core[i] = nbrs[i].size() >= options.min_points;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!c.core[i] || c.labels[i] >= 0) continue;
    const int label = c.clusters++;
    std::vector<std::size_t> stack{i};
    c.labels[i] = label;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto u : nbrs[v]) {
        if (c.labels[u] >= 0) continue;
        c.labels[u] = label;
        if (c.core[u]) stack.push_back(u);
      }
    }
  }
  return c;
}

std::vector<Point2> trajectory_centroids(const mobility::Dataset& data) {
  std::vector<Point2> out;
  for (const auto& t : data.trajectories()) {
    double x = 0.0, y = 0.0;
    for (const auto& p : t.points) {
      x += p.point.position.x;
      y += p.point.position.y;
    }
    const auto n = static_cast<double>(t.size());
    out.push_back({x / n, y / n});
  }
  return out;
}

double mean_silhouette(const std::vector<Point2>& points, const std::vector<int>& labels) {
  if (points.size() != labels.size()) throw Error("points and labels differ in length");
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) members[labels[i]].push_back(i);
  }
  if (members.size() < 2) throw Inapplicable("silhouette needs at least two clusters");
  std::vector<double> scores;
  for (const auto& [label, own] : members) {
    for (auto i : own) {
      if (own.size() == 1) {
        scores.push_back(0.0);
        continue;
      }
      double a = 0.0;
      for (auto j : own) a += distance(points[i], points[j]);
      a /= static_cast<double>(own.size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (const auto& [other, theirs] : members) {
        if (other == label) continue;
        double sum = 0.0;
        for (auto j : theirs) sum += distance(points[i], points[j]);
        b = std::min(b, sum / static_cast<double>(theirs.size()));
      }
      const double scale = std::max(a, b);
      scores.push_back(scale > 0.0 ? (b - a) / scale : 0.0);
    }
  }
  return stats::mean(scores);
}

MetricValue trajectory_clustering(const mobility::Dataset& syn, const mobility::Dataset& real,
                                  const ClusterOptions& options) {
  const auto syn_centroids = trajectory_centroids(syn);
  const auto clusters = dbscan(syn_centroids, options);
  if (clusters.clusters < 2) throw Inapplicable("fewer than two clusters found in the synthetic centroids");
  std::vector<Point2> cores;
  std::vector<int> core_labels;
  for (std::size_t i = 0; i < syn_centroids.size(); ++i) {
    if (clusters.core[i]) {
      cores.push_back(syn_centroids[i]);
      core_labels.push_back(clusters.labels[i]);
    }
  }
  const auto tree = index_points(cores);
  const auto real_centroids = trajectory_centroids(real);
  std::vector<int> labels(real_centroids.size(), -1);
  MetricValue out;
  for (std::size_t i = 0; i < real_centroids.size(); ++i) {
    const BPoint q(real_centroids[i].x, real_centroids[i].y);
    std::vector<Entry> hit;
    tree.query(bgi::nearest(q, 1), std::back_inserter(hit));
    if (distance(real_centroids[i], cores[hit.front().second]) <= options.eps_m) {
      labels[i] = core_labels[hit.front().second];
    } else {
      ++out.excluded;
    }
  }
  out.value = mean_silhouette(real_centroids, labels);
  if (out.excluded > 0) out.note = std::to_string(out.excluded) + " real centroids unassigned (noise)";
  return out;
}

}  // namespace trajeval::metrics
