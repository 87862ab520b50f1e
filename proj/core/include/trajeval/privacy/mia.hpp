#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajeval/error.hpp"
#include "trajeval/generators/generators.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::privacy {

enum class DistanceKind { Frechet, Custom };

std::string to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(const std::string& text);

/// Weights of the semantic terms added to the Frechet distance by the
/// custom metric.
struct FeatureWeights {
  double category = 1.0;
  double hour_of_day = 1.0;
  double day_of_week = 1.0;
};

/// 1 - cosine similarity of two frequency vectors; 0 when both are zero,
/// 1 when exactly one is.
double cosine_dissimilarity(const std::vector<double>& a, const std::vector<double>& b);

/// Frechet distance over positions plus the weighted cosine dissimilarity
/// of the category, hour-of-day and day-of-week frequency vectors (UTC).
double custom_distance(const mobility::Trajectory& a, const mobility::Trajectory& b,
                       const FeatureWeights& weights = {});

double attack_distance(const mobility::Trajectory& a, const mobility::Trajectory& b,
                       DistanceKind kind, const FeatureWeights& weights = {});

/// What the attacker sees of a target: the retained points, their
/// positions in the original trajectory and the original length.
struct TargetView {
  mobility::Trajectory visible;
  std::vector<std::size_t> positions;
  std::size_t length = 0;

  static TargetView full(const mobility::Trajectory& t);
  static TargetView masked(const mobility::Trajectory& t, double keep_fraction, std::uint64_t seed);
};

/// Points of `candidate` at the target positions, rescaled proportionally
/// when the candidate length differs from the original length.
mobility::Trajectory restrict_to(const mobility::Trajectory& candidate, const TargetView& view);

struct ScoreSettings {
  DistanceKind kind = DistanceKind::Frechet;
  FeatureWeights weights;
  bool length_filter = true;
  /// Masks the attacker's records before scoring; 1 leaves them whole.
  double keep_fraction = 1.0;
};

class NoCandidate : public Error {
 public:
  using Error::Error;
};

/// Released records bucketed by length.
class CandidatePool {
 public:
  explicit CandidatePool(const mobility::Dataset& released);
  const mobility::Dataset& released() const { return *released_; }
  const std::vector<std::size_t>& of_length(std::size_t length) const;

 private:
  const mobility::Dataset* released_;
  std::map<std::size_t, std::vector<std::size_t>> by_length_;
};

struct AlphaScore {
  double alpha = 0.0;
  /// 0 for an exact length match, otherwise the tolerance that was needed.
  int relaxation = 0;
  std::size_t candidates = 0;
};

/// Minimum distance from the target to the released records of the same
/// length. An empty candidate set widens to lengths within +-1, then +-2;
/// NoCandidate is thrown past that.
AlphaScore compute_alpha(const TargetView& target, const CandidatePool& pool,
                         const ScoreSettings& settings);
AlphaScore compute_alpha(const mobility::Trajectory& target, const mobility::Dataset& released,
                         const ScoreSettings& settings = {});

struct AuxSplit {
  mobility::Dataset d_aux_train;
  mobility::Dataset q_aux;
  mobility::Dataset q_tau;
};

AuxSplit split_aux(const mobility::Dataset& d_aux, const std::vector<double>& fractions,
                   std::uint64_t seed);

struct ThresholdModel {
  double tau = 0.0;
  DistanceKind kind = DistanceKind::Frechet;
  double member_mean = 0.0;
  double non_member_mean = 0.0;
  std::vector<double> member_scores;
  std::vector<double> non_member_scores;
  std::size_t unscored = 0;
  std::optional<std::string> warning;
};

/// Midpoint of the two means.
ThresholdModel threshold_from_scores(std::vector<double> member_scores,
                                     std::vector<double> non_member_scores, DistanceKind kind);

/// Fits a shadow model on d_aux_train, blurs q_aux and scores q_aux
/// (members) and q_tau (non-members) against the shadow release.
ThresholdModel learn_threshold(const AuxSplit& split, const generators::BlurringFactory& model,
                               const ScoreSettings& settings, std::uint64_t seed);

enum class Decision { In, Out };

std::string to_string(Decision d);

/// IN iff alpha <= tau.
Decision decide(double alpha, const ThresholdModel& tm);

enum class Scenario { Main, Masked, ReleasedOnly };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& text);

struct AttackConfig {
  Scenario scenario = Scenario::Main;
  DistanceKind kind = DistanceKind::Frechet;
  FeatureWeights weights;
  std::optional<double> keep_fraction;
  std::vector<double> aux_fractions{0.5, 0.25, 0.25};
  std::size_t seeds = 4;
  std::uint64_t seed = 0;
  bool length_filter = true;
  std::size_t targets_per_class = 100;

  void validate() const;
  ScoreSettings score_settings() const;
};

AttackConfig attack_config_from_json(const std::string& text);
std::string attack_config_to_json(const AttackConfig& cfg);

struct TargetSetup {
  mobility::Dataset d_train;
  mobility::Dataset q_target;
  /// Non-member pool, disjoint from d_train, q_target and the auxiliary data.
  mobility::Dataset held_out;
  generators::BlurringFactory model;
};

/// Trajectory-level partition into d_train, q_target, held_out and d_aux.
struct AttackPartition {
  mobility::Dataset d_train;
  mobility::Dataset q_target;
  mobility::Dataset held_out;
  mobility::Dataset d_aux;
};

AttackPartition partition_for_attack(const mobility::Dataset& d,
                                     const std::vector<double>& fractions, std::uint64_t seed);

struct TargetDecision {
  std::size_t run = 0;
  std::string traj_id;
  bool member = false;
  double alpha = 0.0;
  int relaxation = 0;
  bool scored = true;
  Decision decision = Decision::Out;
  bool correct() const { return (decision == Decision::In) == member; }
};

struct AttackRun {
  std::uint64_t seed = 0;
  ThresholdModel threshold;
  double accuracy = 0.0;
  std::size_t unscored = 0;
};

struct AttackResult {
  AttackConfig config;
  std::string model;
  std::vector<AttackRun> runs;
  std::vector<TargetDecision> decisions;
  double accuracy = 0.0;  // pooled over all runs
  double mean = 0.0;
  double std_dev = 0.0;  // population std of per-run accuracies
};

/// Full pipeline per seed: train the target model on d_train, release
/// S_target = blur(q_target), learn tau on the scenario's auxiliary data and
/// score a balanced member/non-member target set. The released-only
/// scenario takes no auxiliary data; pass nullptr.
AttackResult run_attack(const TargetSetup& setup, const mobility::Dataset* d_aux,
                        const AttackConfig& cfg);

std::string attack_result_to_json(const AttackResult& result);
/// run,traj_id,member,alpha,relaxation,decision,correct
std::string decisions_to_csv(const AttackResult& result);

/// Formats "0.883 ± 0.013".
std::string mean_pm_std(double mean, double std);

}  // namespace trajeval::privacy
