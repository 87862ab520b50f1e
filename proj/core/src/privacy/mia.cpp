#include "trajeval/privacy/mia.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <nlohmann/json.hpp>
#include <numeric>

#include "trajeval/measures/trajectory_distance.hpp"
#include "trajeval/mobility/split.hpp"
#include "trajeval/parallel.hpp"
#include "trajeval/random.hpp"
#include "trajeval/stats.hpp"

namespace trajeval::privacy {

using mobility::Dataset;
using mobility::Trajectory;
using nlohmann::ordered_json;

namespace {

constexpr int kMaxRelaxation = 2;

// Stream tags for seeds derived from one run seed.
enum Stream : std::uint64_t { kRelease = 1, kAuxSplit, kShadow, kTargets, kMask };

std::int64_t floor_div(double value, double unit) {
  return static_cast<std::int64_t>(std::floor(value / unit));
}

std::int64_t positive_mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

struct Features {
  std::vector<double> category;
  std::vector<double> hour = std::vector<double>(24, 0.0);
  std::vector<double> weekday = std::vector<double>(7, 0.0);
};

Features features_of(const Trajectory& t, std::size_t categories) {
  Features f;
  f.category.assign(categories, 0.0);
  for (const auto& p : t.points) {
    if (p.category) f.category[*p.category] += 1.0;
    f.hour[positive_mod(floor_div(p.timestamp, 3600.0), 24)] += 1.0;
    // 1970-01-01 was a Thursday; index 0 is Monday.
    f.weekday[positive_mod(floor_div(p.timestamp, 86400.0) + 3, 7)] += 1.0;
  }
  return f;
}

std::size_t category_span(const Trajectory& t) {
  std::size_t n = 0;
  for (const auto& p : t.points)
    if (p.category) n = std::max<std::size_t>(n, *p.category + 1);
  return n;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, Rng& rng) {
  std::vector<std::size_t> all(population);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> out;
  std::sample(all.begin(), all.end(), std::back_inserter(out), count, rng);
  return out;
}

// Scores every record of `queries` against `pool`; unscored records yield nullopt.
std::vector<std::optional<AlphaScore>> score_all(const Dataset& queries,
                                                 std::span<const std::size_t> which,
                                                 const CandidatePool& pool,
                                                 const ScoreSettings& settings,
                                                 std::uint64_t mask_seed) {
  std::vector<std::optional<AlphaScore>> out(which.size());
  parallel_for(which.size(), [&](std::size_t k) {
    const auto& t = queries[which[k]];
    const auto view = settings.keep_fraction < 1.0
                          ? TargetView::masked(t, settings.keep_fraction, mix_seed(mask_seed, which[k]))
                          : TargetView::full(t);
    try {
      out[k] = compute_alpha(view, pool, settings);
    } catch (const NoCandidate&) {
    }
  });
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::string to_string(DistanceKind kind) {
  return kind == DistanceKind::Frechet ? "frechet" : "custom";
}

DistanceKind distance_kind_from_string(const std::string& text) {
  if (text == "frechet") return DistanceKind::Frechet;
  if (text == "custom") return DistanceKind::Custom;
  throw Error("unknown attack metric '" + text + "' (expected frechet or custom)");
}

double cosine_dissimilarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("feature vectors differ in length");
  const bool a_zero = std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
  const bool b_zero = std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
  if (a_zero && b_zero) return 0.0;
  if (a_zero || b_zero) return 1.0;
  return measures::cosine_distance(a, b);
}

double custom_distance(const Trajectory& a, const Trajectory& b, const FeatureWeights& weights) {
  if (a.points.empty() || b.points.empty()) throw Error("custom distance of an empty trajectory");
  const auto pa = a.positions(), pb = b.positions();
  const std::size_t categories = std::max(category_span(a), category_span(b));
  const auto fa = features_of(a, categories), fb = features_of(b, categories);
  return measures::discrete_frechet(pa, pb) +
         weights.category * cosine_dissimilarity(fa.category, fb.category) +
         weights.hour_of_day * cosine_dissimilarity(fa.hour, fb.hour) +
         weights.day_of_week * cosine_dissimilarity(fa.weekday, fb.weekday);
}

double attack_distance(const Trajectory& a, const Trajectory& b, DistanceKind kind,
                       const FeatureWeights& weights) {
  if (kind == DistanceKind::Custom) return custom_distance(a, b, weights);
  if (a.points.empty() || b.points.empty()) throw Error("Frechet distance of an empty trajectory");
  const auto pa = a.positions(), pb = b.positions();
  return measures::discrete_frechet(pa, pb);
}

TargetView TargetView::full(const Trajectory& t) {
  return {t, all_indices(t.size()), t.size()};
}

TargetView TargetView::masked(const Trajectory& t, double keep_fraction, std::uint64_t seed) {
  TargetView view{{t.traj_id, t.user_id, {}}, mobility::mask_indices(t.size(), keep_fraction, seed),
                  t.size()};
  for (auto i : view.positions) view.visible.points.push_back(t.points[i]);
  return view;
}

Trajectory restrict_to(const Trajectory& candidate, const TargetView& view) {
  const std::size_t n = candidate.size();
  if (n == 0) throw Error("cannot restrict an empty trajectory");
  if (n == view.length && view.positions.size() == view.length) return candidate;
  Trajectory out{candidate.traj_id, candidate.user_id, {}};
  out.points.reserve(view.positions.size());
  for (auto pos : view.positions) {
    std::size_t mapped = pos;
    if (n != view.length) {
      mapped = view.length <= 1 ? 0
                                : static_cast<std::size_t>(std::llround(
                                      static_cast<double>(pos) * static_cast<double>(n - 1) /
                                      static_cast<double>(view.length - 1)));
    }
    out.points.push_back(candidate.points[std::min(mapped, n - 1)]);
  }
  return out;
}

CandidatePool::CandidatePool(const Dataset& released) : released_(&released) {
  for (std::size_t i = 0; i < released.size(); ++i) by_length_[released[i].size()].push_back(i);
}

const std::vector<std::size_t>& CandidatePool::of_length(std::size_t length) const {
  static const std::vector<std::size_t> none;
  const auto it = by_length_.find(length);
  return it == by_length_.end() ? none : it->second;
}

AlphaScore compute_alpha(const TargetView& target, const CandidatePool& pool,
                         const ScoreSettings& settings) {
  if (target.visible.points.empty()) throw Error("target has no visible points");
  const auto& released = pool.released();

  auto score_over = [&](std::span<const std::size_t> candidates) {
    double best = std::numeric_limits<double>::infinity();
    for (auto i : candidates) {
      const auto restricted = restrict_to(released[i], target);
      best = std::min(best, attack_distance(target.visible, restricted, settings.kind, settings.weights));
      if (best == 0.0) break;
    }
    return best;
  };

  if (!settings.length_filter) {
    if (released.empty()) throw NoCandidate("released dataset is empty");
    const auto all = all_indices(released.size());
    return {score_over(all), 0, all.size()};
  }
  for (int tol = 0; tol <= kMaxRelaxation; ++tol) {
    std::vector<std::size_t> candidates;
    for (int sign : {0, -1, 1}) {
      if (tol == 0 && sign != 0) continue;
      if (tol > 0 && sign == 0) continue;
      const auto len = static_cast<std::int64_t>(target.length) + sign * tol;
      if (len <= 0) continue;
      const auto& bucket = pool.of_length(static_cast<std::size_t>(len));
      candidates.insert(candidates.end(), bucket.begin(), bucket.end());
    }
    if (!candidates.empty()) return {score_over(candidates), tol, candidates.size()};
  }
  throw NoCandidate(fmt::format("no released record within +-{} of length {}", kMaxRelaxation,
                                target.length));
}

AlphaScore compute_alpha(const Trajectory& target, const Dataset& released,
                         const ScoreSettings& settings) {
  CandidatePool pool(released);
  return compute_alpha(TargetView::full(target), pool, settings);
}

AuxSplit split_aux(const Dataset& d_aux, const std::vector<double>& fractions, std::uint64_t seed) {
  if (fractions.size() != 3) throw Error("auxiliary split needs exactly three fractions");
  auto parts = mobility::split_dataset(d_aux, {fractions, false}, seed);
  for (const auto& p : parts)
    if (p.empty()) throw Error(fmt::format("auxiliary split of {} records leaves an empty part", d_aux.size()));
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

ThresholdModel threshold_from_scores(std::vector<double> member_scores,
                                     std::vector<double> non_member_scores, DistanceKind kind) {
  if (member_scores.empty() || non_member_scores.empty())
    throw Error("threshold needs member and non-member scores");
  ThresholdModel tm;
  tm.kind = kind;
  tm.member_mean = stats::mean(member_scores);
  tm.non_member_mean = stats::mean(non_member_scores);
  tm.tau = (tm.member_mean + tm.non_member_mean) / 2.0;
  if (tm.member_mean == tm.non_member_mean) {
    tm.tau = tm.member_mean;
    tm.warning = "member and non-member scores have equal means; the threshold does not separate them";
  }
  tm.member_scores = std::move(member_scores);
  tm.non_member_scores = std::move(non_member_scores);
  return tm;
}

ThresholdModel learn_threshold(const AuxSplit& split, const generators::BlurringFactory& model,
                               const ScoreSettings& settings, std::uint64_t seed) {
  auto shadow = model();
  shadow->fit(split.d_aux_train);
  const Dataset s_aux = shadow->blur(split.q_aux, mix_seed(seed, kRelease));
  const CandidatePool pool(s_aux);

  std::size_t unscored = 0;
  auto collect = [&](const Dataset& queries, std::uint64_t mask_seed) {
    const auto idx = all_indices(queries.size());
    std::vector<double> scores;
    for (const auto& s : score_all(queries, idx, pool, settings, mask_seed)) {
      if (s) scores.push_back(s->alpha);
      else ++unscored;
    }
    return scores;
  };
  auto members = collect(split.q_aux, mix_seed(seed, kMask));
  auto non_members = collect(split.q_tau, mix_seed(seed, kMask + 1));
  auto tm = threshold_from_scores(std::move(members), std::move(non_members), settings.kind);
  tm.unscored = unscored;
  return tm;
}

std::string to_string(Decision d) { return d == Decision::In ? "IN" : "OUT"; }

Decision decide(double alpha, const ThresholdModel& tm) {
  return alpha <= tm.tau ? Decision::In : Decision::Out;
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Main: return "main";
    case Scenario::Masked: return "masked";
    case Scenario::ReleasedOnly: return "released_only";
  }
  return "main";
}

Scenario scenario_from_string(const std::string& text) {
  if (text == "main") return Scenario::Main;
  if (text == "masked") return Scenario::Masked;
  if (text == "released_only") return Scenario::ReleasedOnly;
  throw Error("unknown scenario '" + text + "' (expected main, masked or released_only)");
}

void AttackConfig::validate() const {
  if (scenario == Scenario::Masked && !keep_fraction)
    throw Error("masked scenario requires keep_fraction");
  if (keep_fraction && !(*keep_fraction > 0.0 && *keep_fraction <= 1.0))
    throw Error("keep_fraction must lie in (0, 1]");
  if (aux_fractions.size() != 3) throw Error("aux split needs exactly three fractions");
  mobility::split_sizes(3, aux_fractions);
  if (seeds == 0) throw Error("attack needs at least one seed");
  if (targets_per_class == 0) throw Error("attack needs at least one target per class");
}

ScoreSettings AttackConfig::score_settings() const {
  ScoreSettings s{kind, weights, length_filter, 1.0};
  if (scenario == Scenario::Masked) s.keep_fraction = *keep_fraction;
  return s;
}

AttackConfig attack_config_from_json(const std::string& text) {
  AttackConfig cfg;
  const auto j = ordered_json::parse(text);
  if (!j.is_object()) throw Error("attack config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") cfg.scenario = scenario_from_string(value.get<std::string>());
    else if (key == "metric") cfg.kind = distance_kind_from_string(value.get<std::string>());
    else if (key == "keep_fraction") cfg.keep_fraction = value.get<double>();
    else if (key == "fractions") cfg.aux_fractions = value.get<std::vector<double>>();
    else if (key == "seeds") cfg.seeds = value.get<std::size_t>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "length_filter") cfg.length_filter = value.get<bool>();
    else if (key == "targets_per_class") cfg.targets_per_class = value.get<std::size_t>();
    else if (key == "weights") {
      for (const auto& [w, v] : value.items()) {
        if (w == "category") cfg.weights.category = v.get<double>();
        else if (w == "hour_of_day") cfg.weights.hour_of_day = v.get<double>();
        else if (w == "day_of_week") cfg.weights.day_of_week = v.get<double>();
        else throw Error("unknown feature weight '" + w + "'");
      }
    } else {
      throw Error("unknown attack config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string attack_config_to_json(const AttackConfig& cfg) {
  ordered_json j;
  j["scenario"] = to_string(cfg.scenario);
  j["metric"] = to_string(cfg.kind);
  if (cfg.keep_fraction) j["keep_fraction"] = *cfg.keep_fraction;
  j["fractions"] = cfg.aux_fractions;
  j["seeds"] = cfg.seeds;
  j["seed"] = cfg.seed;
  j["length_filter"] = cfg.length_filter;
  j["targets_per_class"] = cfg.targets_per_class;
  j["weights"] = {{"category", cfg.weights.category},
                  {"hour_of_day", cfg.weights.hour_of_day},
                  {"day_of_week", cfg.weights.day_of_week}};
  return j.dump(2);
}

AttackPartition partition_for_attack(const Dataset& d, const std::vector<double>& fractions,
                                     std::uint64_t seed) {
  if (fractions.size() != 4) throw Error("attack partition needs four fractions");
  auto parts = mobility::split_dataset(d, {fractions, false}, seed);
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2]), std::move(parts[3])};
}

AttackResult run_attack(const TargetSetup& setup, const Dataset* d_aux, const AttackConfig& cfg) {
  cfg.validate();
  if (!setup.model) throw Error("attack needs a blurring model");
  if (cfg.scenario == Scenario::ReleasedOnly && d_aux)
    throw Error("released_only scenario takes no auxiliary data");
  if (cfg.scenario != Scenario::ReleasedOnly && (!d_aux || d_aux->empty()))
    throw Error(to_string(cfg.scenario) + " scenario requires auxiliary data");
  if (setup.q_target.size() < cfg.targets_per_class)
    throw Error(fmt::format("q_target holds {} records, {} member targets requested",
                            setup.q_target.size(), cfg.targets_per_class));
  if (setup.held_out.size() < cfg.targets_per_class)
    throw Error(fmt::format("insufficient held-out non-members: {} available, {} requested",
                            setup.held_out.size(), cfg.targets_per_class));

  const auto settings = cfg.score_settings();
  AttackResult result;
  result.config = cfg;
  std::size_t correct_total = 0, scored_total = 0;
  std::vector<double> accuracies;

  for (std::size_t run = 0; run < cfg.seeds; ++run) {
    const std::uint64_t run_seed = mix_seed(cfg.seed, run);
    auto target_model = setup.model();
    if (run == 0) result.model = target_model->name();
    target_model->fit(setup.d_train);
    const Dataset s_target = target_model->blur(setup.q_target, mix_seed(run_seed, kRelease));

    const Dataset& aux_source = cfg.scenario == Scenario::ReleasedOnly ? s_target : *d_aux;
    const auto split = split_aux(aux_source, cfg.aux_fractions, mix_seed(run_seed, kAuxSplit));
    AttackRun out;
    out.seed = run_seed;
    out.threshold = learn_threshold(split, setup.model, settings, mix_seed(run_seed, kShadow));

    Rng rng = make_rng(run_seed, kTargets);
    const auto members = sample_indices(setup.q_target.size(), cfg.targets_per_class, rng);
    const auto non_members = sample_indices(setup.held_out.size(), cfg.targets_per_class, rng);
    const CandidatePool pool(s_target);
    const auto member_scores = score_all(setup.q_target, members, pool, settings, mix_seed(run_seed, kMask));
    const auto non_member_scores =
        score_all(setup.held_out, non_members, pool, settings, mix_seed(run_seed, kMask + 1));

    std::size_t correct = 0;
    auto record = [&](const Dataset& source, std::span<const std::size_t> which,
                      const std::vector<std::optional<AlphaScore>>& scores, bool member) {
      for (std::size_t k = 0; k < which.size(); ++k) {
        TargetDecision d;
        d.run = run;
        d.traj_id = source[which[k]].traj_id;
        d.member = member;
        if (scores[k]) {
          d.alpha = scores[k]->alpha;
          d.relaxation = scores[k]->relaxation;
          d.decision = decide(d.alpha, out.threshold);
        } else {
          d.alpha = std::numeric_limits<double>::infinity();
          d.scored = false;
          d.decision = Decision::Out;
          ++out.unscored;
        }
        if (d.correct()) ++correct;
        result.decisions.push_back(std::move(d));
      }
    };
    record(setup.q_target, members, member_scores, true);
    record(setup.held_out, non_members, non_member_scores, false);

    const std::size_t n = members.size() + non_members.size();
    out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    accuracies.push_back(out.accuracy);
    correct_total += correct;
    scored_total += n;
    result.runs.push_back(std::move(out));
  }
  result.accuracy = static_cast<double>(correct_total) / static_cast<double>(scored_total);
  result.mean = stats::mean(accuracies);
  result.std_dev = stats::stddev(accuracies);
  return result;
}

std::string attack_result_to_json(const AttackResult& result) {
  ordered_json j;
  j["model"] = result.model;
  j["config"] = ordered_json::parse(attack_config_to_json(result.config));
  j["accuracy"] = result.accuracy;
  j["mean"] = result.mean;
  j["std"] = result.std_dev;
  j["summary"] = mean_pm_std(result.mean, result.std_dev);
  auto& runs = j["runs"] = ordered_json::array();
  for (const auto& r : result.runs) {
    ordered_json row;
    row["seed"] = r.seed;
    row["accuracy"] = r.accuracy;
    row["tau"] = r.threshold.tau;
    row["member_mean"] = r.threshold.member_mean;
    row["non_member_mean"] = r.threshold.non_member_mean;
    row["unscored_targets"] = r.unscored;
    row["unscored_aux"] = r.threshold.unscored;
    if (r.threshold.warning) row["warning"] = *r.threshold.warning;
    runs.push_back(std::move(row));
  }
  auto& targets = j["targets"] = ordered_json::array();
  for (const auto& d : result.decisions) {
    ordered_json row;
    row["run"] = d.run;
    row["traj_id"] = d.traj_id;
    row["member"] = d.member;
    if (d.scored) row["alpha"] = d.alpha;
    else row["alpha"] = nullptr;
    row["relaxation"] = d.relaxation;
    row["decision"] = to_string(d.decision);
    targets.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string decisions_to_csv(const AttackResult& result) {
  std::string out = "run,traj_id,member,alpha,relaxation,decision,correct\n";
  for (const auto& d : result.decisions) {
    out += fmt::format("{},{},{},{},{},{},{}\n", d.run, d.traj_id, d.member ? 1 : 0,
                       d.scored ? fmt::format("{:.6f}", d.alpha) : std::string(), d.relaxation,
                       to_string(d.decision), d.correct() ? 1 : 0);
  }
  return out;
}

std::string mean_pm_std(double mean, double std) {
  return fmt::format("{:.3f} ± {:.3f}", mean, std);
}

}  // namespace trajeval::privacy
