#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "trajeval/mobility/types.hpp"
#include "trajeval/privacy/mia.hpp"

namespace trajeval::privacy {

/// Trajectory-user linking: maps a trajectory to one of the users seen in
/// training.
class TulSolver {
 public:
  virtual ~TulSolver() = default;
  virtual void fit(const mobility::Dataset& d) = 0;
  virtual std::string link(const mobility::Trajectory& t) const = 0;
};

/// Assigns the user owning the nearest training trajectory. Ties go to the
/// lexicographically smallest user id.
class NearestTraceSolver final : public TulSolver {
 public:
  explicit NearestTraceSolver(DistanceKind kind = DistanceKind::Frechet, FeatureWeights weights = {});
  void fit(const mobility::Dataset& d) override;
  std::string link(const mobility::Trajectory& t) const override;

 private:
  DistanceKind kind_;
  FeatureWeights weights_;
  std::vector<mobility::Trajectory> train_;
};

using TulSolverFactory = std::function<std::unique_ptr<TulSolver>()>;

/// Fraction of trajectories in `d` linked to their own user.
double tul_accuracy(const TulSolver& solver, const mobility::Dataset& d);

enum class TulProtocol { Legacy, Fixed };

std::string to_string(TulProtocol p);

struct TulResult {
  TulProtocol protocol = TulProtocol::Legacy;
  double real_accuracy = 0.0;
  double synthetic_accuracy = 0.0;
  /// (real - synthetic) * 100.
  double gap_pp = 0.0;
};

/// Legacy: one solver fitted on d_train, tested on q_target and s_target.
/// Fixed: a solver fitted on d_train tested on q_target, and a second one
/// fitted on s_train tested on s_target.
std::vector<TulResult> tul_protocols(const mobility::Dataset& d_train,
                                     const mobility::Dataset& q_target,
                                     const mobility::Dataset& s_train,
                                     const mobility::Dataset& s_target,
                                     const TulSolverFactory& solver);

/// D_train / Q_target split in which every user with at least two
/// trajectories keeps one in D_train and single-trajectory users stay out
/// of Q_target.
struct TulSplit {
  mobility::Dataset d_train;
  mobility::Dataset q_target;
};

TulSplit split_for_tul(const mobility::Dataset& d, double train_fraction, std::uint64_t seed);

std::string tul_results_to_json(const std::vector<TulResult>& results);

}  // namespace trajeval::privacy
