#include "trajeval/privacy/tul.hpp"

#include <limits>
#include <nlohmann/json.hpp>

#include "trajeval/error.hpp"
#include "trajeval/mobility/split.hpp"
#include "trajeval/parallel.hpp"

namespace trajeval::privacy {

using mobility::Dataset;
using mobility::Trajectory;

NearestTraceSolver::NearestTraceSolver(DistanceKind kind, FeatureWeights weights)
    : kind_(kind), weights_(weights) {}

void NearestTraceSolver::fit(const Dataset& d) {
  if (d.empty()) throw Error("TUL solver needs training trajectories");
  train_ = d.trajectories();
}

std::string NearestTraceSolver::link(const Trajectory& t) const {
  if (train_.empty()) throw Error("TUL solver is not fitted");
  double best = std::numeric_limits<double>::infinity();
  const std::string* user = nullptr;
  for (const auto& candidate : train_) {
    const double d = attack_distance(t, candidate, kind_, weights_);
    if (d < best || (d == best && candidate.user_id < *user)) {
      best = d;
      user = &candidate.user_id;
    }
  }
  return *user;
}

double tul_accuracy(const TulSolver& solver, const Dataset& d) {
  if (d.empty()) throw Error("TUL accuracy of an empty dataset");
  std::vector<char> hit(d.size(), 0);
  parallel_for(d.size(), [&](std::size_t i) { hit[i] = solver.link(d[i]) == d[i].user_id; });
  std::size_t correct = 0;
  for (char h : hit) correct += h;
  return static_cast<double>(correct) / static_cast<double>(d.size());
}

std::string to_string(TulProtocol p) { return p == TulProtocol::Legacy ? "legacy" : "fixed"; }

std::vector<TulResult> tul_protocols(const Dataset& d_train, const Dataset& q_target,
                                     const Dataset& s_train, const Dataset& s_target,
                                     const TulSolverFactory& solver) {
  auto on_real = solver();
  on_real->fit(d_train);
  const double real = tul_accuracy(*on_real, q_target);

  TulResult legacy{TulProtocol::Legacy, real, tul_accuracy(*on_real, s_target), 0.0};
  legacy.gap_pp = (legacy.real_accuracy - legacy.synthetic_accuracy) * 100.0;

  auto on_synthetic = solver();
  on_synthetic->fit(s_train);
  TulResult fixed{TulProtocol::Fixed, real, tul_accuracy(*on_synthetic, s_target), 0.0};
  fixed.gap_pp = (fixed.real_accuracy - fixed.synthetic_accuracy) * 100.0;
  return {legacy, fixed};
}

TulSplit split_for_tul(const Dataset& d, double train_fraction, std::uint64_t seed) {
  auto parts = mobility::split_dataset(d, {{train_fraction, 1.0 - train_fraction}, true}, seed);
  if (parts[1].empty()) throw Error("TUL split leaves Q_target empty");
  return {std::move(parts[0]), std::move(parts[1])};
}

std::string tul_results_to_json(const std::vector<TulResult>& results) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    j.push_back({{"protocol", to_string(r.protocol)},
                 {"real_accuracy", r.real_accuracy},
                 {"synthetic_accuracy", r.synthetic_accuracy},
                 {"gap_pp", r.gap_pp}});
  }
  return j.dump(2) + "\n";
}

}  // namespace trajeval::privacy
