#include "trajeval/measures/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trajeval/error.hpp"

namespace trajeval::measures {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw Error("cost matrix size does not match its shape");
}

namespace {

constexpr auto kNone = std::numeric_limits<std::size_t>::max();

struct BasicArc {
  std::size_t row;
  std::size_t col;
  double flow;
};

// Network simplex specialised to the complete bipartite transportation
// graph. The basis is a spanning tree of n + m - 1 arcs; node i < n is a
// source, node n + j a sink. Tree structure and potentials are rebuilt
// after every pivot, which is O(n + m) and keeps the update logic simple.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand, std::vector<double> cost)
      : n_(supply.size()),
        m_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(std::move(cost)),
        adjacency_(n_ + m_),
        parent_(n_ + m_),
        parent_arc_(n_ + m_),
        depth_(n_ + m_),
        potential_(n_ + m_) {
    double scale = 1.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    epsilon_ = 1e-11 * scale;
  }

  std::size_t run() {
    northwest_corner();
    const std::size_t arcs = n_ * m_;
    const std::size_t limit = 100 * (arcs + n_ + m_) + 1000;
    const std::size_t block = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs))), 10, std::max<std::size_t>(arcs, 1));
    std::size_t degenerate_run = 0;
    bool bland = false;
    std::size_t pivots = 0;
    for (;; ++pivots) {
      if (pivots > limit) throw Error("network simplex exceeded its pivot limit");
      rebuild_tree();
      const std::size_t entering = bland ? entering_bland() : entering_block(block);
      if (entering == kNone) break;
      const bool progressed = pivot(entering / m_, entering % m_, bland);
      if (progressed) {
        degenerate_run = 0;
        bland = false;
      } else if (++degenerate_run > n_ + m_) {
        // Bland's rule cannot cycle; it is only used to escape degenerate stalls.
        bland = true;
      }
    }
    return pivots;
  }

  double objective() const {
    double total = 0.0;
    for (const auto& a : basis_) total += a.flow * cost(a.row, a.col);
    return total;
  }

  const std::vector<BasicArc>& basis() const { return basis_; }

 private:
  double cost(std::size_t i, std::size_t j) const { return cost_[i * m_ + j]; }
  double reduced(std::size_t i, std::size_t j) const {
    return cost(i, j) - potential_[i] - potential_[n_ + j];
  }

  void northwest_corner() {
    std::size_t i = 0, j = 0;
    double s = supply_[0], d = demand_[0];
    basis_.reserve(n_ + m_ - 1);
    for (;;) {
      bool next_row;
      if (j == m_ - 1) next_row = true;
      else if (i == n_ - 1) next_row = false;
      else next_row = s <= d;
      basis_.push_back({i, j, std::max(next_row ? s : d, 0.0)});
      if (i == n_ - 1 && j == m_ - 1) break;
      if (next_row) {
        d -= s;
        s = supply_[++i];
      } else {
        s -= d;
        d = demand_[++j];
      }
    }
  }

  void rebuild_tree() {
    for (auto& list : adjacency_) list.clear();
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const auto& a = basis_[k];
      adjacency_[a.row].push_back({n_ + a.col, k});
      adjacency_[n_ + a.col].push_back({a.row, k});
    }
    std::fill(parent_.begin(), parent_.end(), kNone);
    queue_.assign(1, 0);
    parent_[0] = 0;
    parent_arc_[0] = kNone;
    depth_[0] = 0;
    potential_[0] = 0.0;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::size_t u = queue_[head];
      for (const auto& [v, k] : adjacency_[u]) {
        if (parent_[v] != kNone) continue;
        parent_[v] = u;
        parent_arc_[v] = k;
        depth_[v] = depth_[u] + 1;
        potential_[v] = cost(basis_[k].row, basis_[k].col) - potential_[u];
        queue_.push_back(v);
      }
    }
    if (queue_.size() != n_ + m_) throw Error("network simplex basis is not a spanning tree");
  }

  std::size_t entering_block(std::size_t block) {
    const std::size_t arcs = n_ * m_;
    std::size_t scanned = 0;
    std::size_t found = kNone;
    double best = -epsilon_;
    while (scanned < arcs) {
      const std::size_t stop = std::min(scanned + block, arcs);
      for (; scanned < stop; ++scanned) {
        const std::size_t k = next_arc_;
        next_arc_ = next_arc_ + 1 == arcs ? 0 : next_arc_ + 1;
        const double r = reduced(k / m_, k % m_);
        if (r < best) {
          best = r;
          found = k;
        }
      }
      if (found != kNone) return found;
    }
    return kNone;
  }

  std::size_t entering_bland() const {
    for (std::size_t k = 0; k < n_ * m_; ++k)
      if (reduced(k / m_, k % m_) < -epsilon_) return k;
    return kNone;
  }

  // Pushes flow around the cycle closed by arc (row, col). Returns whether
  // the pivot moved a positive amount of mass.
  bool pivot(std::size_t row, std::size_t col, bool bland) {
    path_a_.clear();
    path_b_.clear();
    std::size_t a = row, b = n_ + col;
    while (depth_[b] > depth_[a]) { path_b_.push_back(parent_arc_[b]); b = parent_[b]; }
    while (depth_[a] > depth_[b]) { path_a_.push_back(parent_arc_[a]); a = parent_[a]; }
    while (a != b) {
      path_b_.push_back(parent_arc_[b]);
      b = parent_[b];
      path_a_.push_back(parent_arc_[a]);
      a = parent_[a];
    }
    // Cycle from the sink end back to the source end; arcs alternate
    // decreasing / increasing, starting with a decrease.
    cycle_.assign(path_b_.begin(), path_b_.end());
    cycle_.insert(cycle_.end(), path_a_.rbegin(), path_a_.rend());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leaving = kNone;
    for (std::size_t t = 0; t < cycle_.size(); t += 2) {
      const auto& arc = basis_[cycle_[t]];
      const bool better = arc.flow < theta ||
                          (bland && arc.flow == theta &&
                           arc.row * m_ + arc.col < basis_[leaving].row * m_ + basis_[leaving].col);
      if (better) {
        theta = arc.flow;
        leaving = cycle_[t];
      }
    }
    for (std::size_t t = 0; t < cycle_.size(); ++t) {
      auto& arc = basis_[cycle_[t]];
      if (t % 2 == 0) arc.flow = std::max(0.0, arc.flow - theta);
      else arc.flow += theta;
    }
    basis_[leaving] = {row, col, theta};
    return theta > 0.0;
  }

  std::size_t n_, m_;
  std::vector<double> supply_, demand_, cost_;
  std::vector<BasicArc> basis_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
  std::vector<std::size_t> parent_, parent_arc_, depth_;
  std::vector<double> potential_;
  std::vector<std::size_t> queue_, path_a_, path_b_, cycle_;
  std::size_t next_arc_ = 0;
  double epsilon_ = 0.0;
};

double checked_total(std::span<const double> values, const char* what) {
  double total = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw Error(std::string(what) + " must be finite and non-negative");
    total += v;
  }
  return total;
}

}  // namespace

TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const CostMatrix& cost) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size()) {
    throw Error("cost matrix shape does not match the supports");
  }
  const double total_supply = checked_total(supply, "supplies");
  const double total_demand = checked_total(demand, "demands");
  if (std::abs(total_supply - total_demand) > 1e-9 * std::max(1.0, total_supply)) {
    throw Error("transport problem is unbalanced");
  }
  for (double c : cost.values())
    if (!std::isfinite(c)) throw Error("transport costs must be finite");

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < supply.size(); ++i)
    if (supply[i] > 0.0) rows.push_back(i);
  for (std::size_t j = 0; j < demand.size(); ++j)
    if (demand[j] > 0.0) cols.push_back(j);
  if (rows.empty() || cols.empty()) return {};

  std::vector<double> a, b, c;
  a.reserve(rows.size());
  b.reserve(cols.size());
  c.reserve(rows.size() * cols.size());
  for (auto i : rows) a.push_back(supply[i]);
  for (auto j : cols) b.push_back(demand[j]);
  for (auto i : rows)
    for (auto j : cols) c.push_back(cost(i, j));

  TransportSimplex simplex(std::move(a), std::move(b), std::move(c));
  TransportSolution solution;
  solution.pivots = simplex.run();
  solution.cost = simplex.objective();
  for (const auto& arc : simplex.basis()) {
    if (arc.flow > 0.0) solution.plan.push_back({rows[arc.row], cols[arc.col], arc.flow});
  }
  return solution;
}

}  // namespace trajeval::measures
