#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trajeval::measures {

/// Dense row-major cost matrix.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct TransportFlow {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

struct TransportSolution {
  double cost = 0.0;
  std::vector<TransportFlow> plan;  // basic flows with positive mass
  std::size_t pivots = 0;
};

/// Exact balanced transportation problem by the network simplex method.
/// Supplies and demands must be non-negative with equal totals (1e-9
/// relative); costs must be finite.
TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const CostMatrix& cost);

}  // namespace trajeval::measures
