#include "trajeval/metrics/transition.hpp"

#include <algorithm>
#include <set>

namespace trajeval::metrics {

using grid::CellId;

TransitionMatrix TransitionMatrix::from_counts(const std::map<CellId, std::map<CellId, double>>& counts,
                                               const std::vector<CellId>& extra_states) {
  std::set<CellId> states(extra_states.begin(), extra_states.end());
  for (const auto& [origin, targets] : counts) {
    states.insert(origin);
    for (const auto& [target, n] : targets) {
      if (!(n >= 0.0)) throw Error("transition counts must be non-negative");
      states.insert(target);
    }
  }
  TransitionMatrix m;
  m.states_.assign(states.begin(), states.end());
  m.rows_.resize(m.states_.size());
  m.visit_counts_.assign(m.states_.size(), 0.0);
  for (const auto& [origin, targets] : counts) {
    const auto i = *m.index_of(origin);
    double total = 0.0;
    for (const auto& [target, n] : targets) total += n;
    m.visit_counts_[i] = total;
    if (total == 0.0) continue;
    for (const auto& [target, n] : targets) {
      if (n > 0.0) m.rows_[i].emplace_back(*m.index_of(target), n / total);
    }
  }
  return m;
}

std::optional<std::size_t> TransitionMatrix::index_of(const CellId& c) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), c);
  if (it == states_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

double TransitionMatrix::total_transitions() const {
  double total = 0.0;
  for (double n : visit_counts_) total += n;
  return total;
}

TransitionMatrix TransitionMatrix::without_origin(const CellId& origin) const {
  TransitionMatrix copy = *this;
  if (auto i = index_of(origin)) {
    copy.rows_[*i].clear();
    copy.visit_counts_[*i] = 0.0;
  }
  return copy;
}

TransitionMatrix build_transition_matrix(const grid::DiscretizedDataset& data) {
  std::map<CellId, std::map<CellId, double>> counts;
  std::vector<CellId> visited;
  for (const auto& t : data.trajectories) {
    visited.insert(visited.end(), t.cells.begin(), t.cells.end());
    for (std::size_t i = 1; i < t.cells.size(); ++i) counts[t.cells[i - 1]][t.cells[i]] += 1.0;
  }
  if (counts.empty()) throw Error("no transitions to build a transition matrix from");
  return TransitionMatrix::from_counts(counts, visited);
}

measures::CellGroundCost transition_ground_cost(const TransitionMatrix& a, const TransitionMatrix& b,
                                                double edge_m) {
  std::vector<CellId> cells = a.states();
  cells.insert(cells.end(), b.states().begin(), b.states().end());
  return measures::CellGroundCost(cells, edge_m);
}

namespace {

measures::CellDistribution row_distribution(const TransitionMatrix& m, std::size_t i) {
  std::vector<CellId> support;
  std::vector<double> weights;
  for (const auto& [j, p] : m.rows()[i]) {
    support.push_back(m.states()[j]);
    weights.push_back(p);
  }
  return measures::CellDistribution::from_weights(std::move(support), std::move(weights));
}

}  // namespace

MetricValue transition_probability_metric(const TransitionMatrix& real, const TransitionMatrix& syn,
                                          const measures::CellGroundCost& cost) {
  const double total = real.total_transitions();
  if (!(total > 0.0)) throw Error("real transition matrix is empty");
  double score = 0.0;
  std::size_t penalized = 0;
  MetricValue out;
  for (std::size_t i = 0; i < real.size(); ++i) {
    if (real.visit_counts()[i] == 0.0 || real.rows()[i].empty()) continue;
    const double weight = real.visit_counts()[i] / total;
    const auto j = syn.index_of(real.states()[i]);
    double d = 1.0;
    if (j && !syn.rows()[*j].empty()) {
      d = std::min(1.0, measures::wasserstein1_cells(row_distribution(real, i), row_distribution(syn, *j), cost));
    } else {
      ++penalized;
    }
    score += weight * d;
  }
  out.value = std::clamp(score, 0.0, 1.0);
  if (penalized > 0) out.note = std::to_string(penalized) + " real origins absent from the synthetic kernel";
  return out;
}

MetricValue transition_probabilities(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn) {
  if (!(real.grid == syn.grid)) throw Error("datasets were discretized on different grids");
  const auto a = build_transition_matrix(real);
  const auto b = build_transition_matrix(syn);
  return transition_probability_metric(a, b, transition_ground_cost(a, b, real.grid.cell_edge_m));
}

}  // namespace trajeval::metrics
