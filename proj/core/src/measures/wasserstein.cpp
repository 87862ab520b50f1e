#include "trajeval/measures/wasserstein.hpp"

#include <cmath>
#include <unordered_map>

namespace trajeval::measures {

using grid::CellId;

double wasserstein1_scalar(const ScalarDistribution& mu, const ScalarDistribution& nu) {
  if (mu.empty() || nu.empty()) throw Error("W1 of an empty distribution");
  const auto& xs = mu.support();
  const auto& ys = nu.support();
  const auto& a = mu.weights();
  const auto& b = nu.weights();
  // Integrate |F_mu - F_nu| over the merged support.
  std::size_t i = 0, j = 0;
  double cdf_a = 0.0, cdf_b = 0.0, total = 0.0;
  double previous = std::min(xs.front(), ys.front());
  while (i < xs.size() || j < ys.size()) {
    const double x = (j == ys.size() || (i < xs.size() && xs[i] <= ys[j])) ? xs[i] : ys[j];
    total += std::abs(cdf_a - cdf_b) * (x - previous);
    while (i < xs.size() && xs[i] == x) cdf_a += a[i++];
    while (j < ys.size() && ys[j] == x) cdf_b += b[j++];
    previous = x;
  }
  return total;
}

double wasserstein1_samples(std::span<const double> a, std::span<const double> b) {
  return wasserstein1_scalar(ScalarDistribution::from_samples(a), ScalarDistribution::from_samples(b));
}

namespace {

std::int64_t cross(const CellId& o, const CellId& a, const CellId& b) {
  return (a.col - o.col) * (b.row - o.row) - (a.row - o.row) * (b.col - o.col);
}

// Largest pairwise centroid distance in cell units, via the convex hull.
double diameter_cells(std::vector<CellId> cells) {
  std::sort(cells.begin(), cells.end(), [](const CellId& a, const CellId& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  if (cells.size() < 2) return 0.0;
  std::vector<CellId> hull(2 * cells.size());
  std::size_t k = 0;
  for (const auto& c : cells) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], c) <= 0) --k;
    hull[k++] = c;
  }
  for (std::size_t i = cells.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], cells[i]) <= 0) --k;
    hull[k++] = cells[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 2) hull = {cells.front(), cells.back()};
  std::int64_t best = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = i + 1; j < hull.size(); ++j) {
      const auto dc = hull[i].col - hull[j].col;
      const auto dr = hull[i].row - hull[j].row;
      best = std::max(best, dc * dc + dr * dr);
    }
  }
  return std::sqrt(static_cast<double>(best));
}

}  // namespace

CellGroundCost::CellGroundCost(std::span<const CellId> reference_cells, double edge_m)
    : edge_m_(edge_m), d_max_cells_(0.0) {
  if (!(edge_m > 0.0)) throw Error("cell edge must be positive");
  if (reference_cells.empty()) throw Error("ground cost needs a non-empty support");
  d_max_cells_ = diameter_cells({reference_cells.begin(), reference_cells.end()});
}

double CellGroundCost::operator()(const CellId& a, const CellId& b) const {
  if (d_max_cells_ == 0.0) return 0.0;
  const double dc = static_cast<double>(a.col - b.col);
  const double dr = static_cast<double>(a.row - b.row);
  return std::min(1.0, std::hypot(dc, dr) / d_max_cells_);
}

GroundCostMatrix::GroundCostMatrix(std::vector<CellId> rows, std::vector<CellId> cols, CostMatrix costs,
                                   double d_max_m)
    : rows_(std::move(rows)), cols_(std::move(cols)), costs_(std::move(costs)), d_max_m_(d_max_m) {
  if (costs_.rows() != rows_.size() || costs_.cols() != cols_.size()) {
    throw Error("cost matrix shape does not match its cell lists");
  }
}

namespace {

std::size_t index_of(const std::vector<CellId>& cells, const CellId& c) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == c) return i;
  }
  throw Error("cell not covered by the cost matrix");
}

}  // namespace

std::size_t GroundCostMatrix::row_index(const CellId& c) const { return index_of(rows_, c); }
std::size_t GroundCostMatrix::col_index(const CellId& c) const { return index_of(cols_, c); }

GroundCostMatrix ground_cost_matrix(std::span<const CellId> rows, std::span<const CellId> cols,
                                    const CellGroundCost& cost) {
  CostMatrix m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = cost(rows[i], cols[j]);
  }
  return {{rows.begin(), rows.end()}, {cols.begin(), cols.end()}, std::move(m), cost.d_max_m()};
}

GroundCostMatrix spatial_ground_cost(std::span<const CellId> cells_a, std::span<const CellId> cells_b,
                                     double edge_m) {
  if (cells_a.empty() || cells_b.empty()) throw Error("ground cost needs non-empty supports");
  std::vector<CellId> all(cells_a.begin(), cells_a.end());
  all.insert(all.end(), cells_b.begin(), cells_b.end());
  return ground_cost_matrix(cells_a, cells_b, CellGroundCost(all, edge_m));
}

namespace {

std::vector<double> spread(const CellDistribution& d, const std::vector<CellId>& cells) {
  std::unordered_map<CellId, std::size_t, grid::CellIdHash> index;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!index.emplace(cells[i], i).second) throw Error("duplicate cell in cost matrix");
  }
  std::vector<double> mass(cells.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto it = index.find(d.support()[i]);
    if (it == index.end()) throw Error("distribution support not covered by the cost matrix");
    mass[it->second] = d.weights()[i];
  }
  return mass;
}

bool same_distribution(const CellDistribution& a, const CellDistribution& b) {
  return a.support() == b.support() && a.weights() == b.weights();
}

}  // namespace

TransportSolution wasserstein1_ground_cost_plan(const CellDistribution& mu, const CellDistribution& nu,
                                                const GroundCostMatrix& cost) {
  if (mu.empty() || nu.empty()) throw Error("W1 of an empty distribution");
  const auto supply = spread(mu, cost.row_cells());
  const auto demand = spread(nu, cost.col_cells());
  return solve_transport(supply, demand, cost.costs());
}

double wasserstein1_ground_cost(const CellDistribution& mu, const CellDistribution& nu,
                                const GroundCostMatrix& cost) {
  auto solution = wasserstein1_ground_cost_plan(mu, nu, cost);
  if (same_distribution(mu, nu)) return 0.0;
  return std::max(0.0, solution.cost);
}

double wasserstein1_cells(const CellDistribution& mu, const CellDistribution& nu, const CellGroundCost& cost) {
  if (mu.empty() || nu.empty()) throw Error("W1 of an empty distribution");
  if (same_distribution(mu, nu)) return 0.0;
  const auto m = ground_cost_matrix(mu.support(), nu.support(), cost);
  return std::max(0.0, solve_transport(mu.weights(), nu.weights(), m.costs()).cost);
}

}  // namespace trajeval::measures
