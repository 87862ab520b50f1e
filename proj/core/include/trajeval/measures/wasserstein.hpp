#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "trajeval/error.hpp"
#include "trajeval/grid/cell.hpp"
#include "trajeval/measures/transport.hpp"

namespace trajeval::measures {

/// Weighted discrete distribution with a sorted, duplicate-free support and
/// weights normalized to sum to one.
template <typename Atom>
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;

  /// Merges duplicate atoms, drops zero-weight atoms and normalizes.
  static EmpiricalDistribution from_weights(std::vector<Atom> support, std::vector<double> weights) {
    if (support.size() != weights.size()) throw Error("support and weights differ in length");
    std::vector<std::size_t> order(support.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    EmpiricalDistribution d;
    double total = 0.0;
    for (auto i : order) {
      if (!(weights[i] >= 0.0)) throw Error("distribution weights must be non-negative");
      if (weights[i] == 0.0) continue;
      if (!d.support_.empty() && d.support_.back() == support[i]) {
        d.weights_.back() += weights[i];
      } else {
        d.support_.push_back(support[i]);
        d.weights_.push_back(weights[i]);
      }
      total += weights[i];
    }
    if (d.support_.empty()) throw Error("distribution has no mass");
    for (auto& w : d.weights_) w /= total;
    return d;
  }

  /// Uniform weight per sample.
  static EmpiricalDistribution from_samples(std::span<const Atom> samples) {
    return from_weights({samples.begin(), samples.end()}, std::vector<double>(samples.size(), 1.0));
  }

  const std::vector<Atom>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }

 private:
  std::vector<Atom> support_;
  std::vector<double> weights_;
};

using ScalarDistribution = EmpiricalDistribution<double>;
using CellDistribution = EmpiricalDistribution<grid::CellId>;

/// Exact W1 between distributions on the real line (CDF integral).
double wasserstein1_scalar(const ScalarDistribution& mu, const ScalarDistribution& nu);

/// Convenience: W1 between two samples with uniform weights.
double wasserstein1_samples(std::span<const double> a, std::span<const double> b);

/// Cost between grid cells: centroid distance divided by the largest
/// centroid distance over a reference cell set. Works in cell units, so it
/// is independent of the edge length and of grid translations.
class CellGroundCost {
 public:
  CellGroundCost(std::span<const grid::CellId> reference_cells, double edge_m);

  double operator()(const grid::CellId& a, const grid::CellId& b) const;
  double edge_m() const { return edge_m_; }
  /// Normalizer in meters.
  double d_max_m() const { return d_max_cells_ * edge_m_; }

 private:
  double edge_m_;
  double d_max_cells_;
};

/// Ground cost over explicit row and column cell lists.
class GroundCostMatrix {
 public:
  GroundCostMatrix(std::vector<grid::CellId> rows, std::vector<grid::CellId> cols, CostMatrix costs,
                   double d_max_m);

  const std::vector<grid::CellId>& row_cells() const { return rows_; }
  const std::vector<grid::CellId>& col_cells() const { return cols_; }
  const CostMatrix& costs() const { return costs_; }
  double d_max_m() const { return d_max_m_; }
  double operator()(std::size_t i, std::size_t j) const { return costs_(i, j); }

  std::size_t row_index(const grid::CellId& c) const;
  std::size_t col_index(const grid::CellId& c) const;

 private:
  std::vector<grid::CellId> rows_, cols_;
  CostMatrix costs_;
  double d_max_m_;
};

/// Normalized centroid-distance costs; d_max spans the union of both
/// supports. A single shared cell gives an all-zero matrix.
GroundCostMatrix spatial_ground_cost(std::span<const grid::CellId> cells_a,
                                     std::span<const grid::CellId> cells_b, double edge_m);

GroundCostMatrix ground_cost_matrix(std::span<const grid::CellId> rows, std::span<const grid::CellId> cols,
                                    const CellGroundCost& cost);

/// Exact W1 under an arbitrary ground cost. Every support atom must be a
/// row (resp. column) of the matrix.
TransportSolution wasserstein1_ground_cost_plan(const CellDistribution& mu, const CellDistribution& nu,
                                                const GroundCostMatrix& cost);
double wasserstein1_ground_cost(const CellDistribution& mu, const CellDistribution& nu,
                                const GroundCostMatrix& cost);

/// Exact W1 with costs evaluated on demand over the two supports.
double wasserstein1_cells(const CellDistribution& mu, const CellDistribution& nu, const CellGroundCost& cost);

}  // namespace trajeval::measures
