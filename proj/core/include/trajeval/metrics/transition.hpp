#pragma once

#include <map>
#include <utility>
#include <vector>

#include "trajeval/grid/grid.hpp"
#include "trajeval/measures/wasserstein.hpp"
#include "trajeval/metrics/result.hpp"

namespace trajeval::metrics {

/// First-order transition kernel over grid cells, pooled over trajectories.
/// States are every visited cell in cell index order; rows are sparse.
class TransitionMatrix {
 public:
  using Row = std::vector<std::pair<std::size_t, double>>;  // (target state, probability)

  TransitionMatrix() = default;
  /// counts[origin][target]; targets and origins become states.
  static TransitionMatrix from_counts(const std::map<grid::CellId, std::map<grid::CellId, double>>& counts,
                                      const std::vector<grid::CellId>& extra_states = {});

  const std::vector<grid::CellId>& states() const { return states_; }
  const std::vector<Row>& rows() const { return rows_; }
  /// n_i: transitions observed from each state.
  const std::vector<double>& visit_counts() const { return visit_counts_; }

  std::size_t size() const { return states_.size(); }
  std::optional<std::size_t> index_of(const grid::CellId& c) const;
  double total_transitions() const;
  /// Copy with the outgoing mass of `origin` removed; the state is kept.
  TransitionMatrix without_origin(const grid::CellId& origin) const;

 private:
  std::vector<grid::CellId> states_;
  std::vector<Row> rows_;
  std::vector<double> visit_counts_;
};

/// Throws when the dataset contains no transition.
TransitionMatrix build_transition_matrix(const grid::DiscretizedDataset& data);

/// Ground cost over the union of both state spaces.
measures::CellGroundCost transition_ground_cost(const TransitionMatrix& a, const TransitionMatrix& b, double edge_m);

/// D = sum_i pi_i d_i over real origins, with d_i the W1 between matching
/// rows, or 1 when the synthetic kernel has no mass leaving state i.
MetricValue transition_probability_metric(const TransitionMatrix& real, const TransitionMatrix& syn,
                                          const measures::CellGroundCost& cost);

MetricValue transition_probabilities(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn);

}  // namespace trajeval::metrics
