#include "trajeval/metrics/registry.hpp"

#include <cmath>

#include "trajeval/metrics/statistics.hpp"
#include "trajeval/metrics/tasks.hpp"
#include "trajeval/metrics/transition.hpp"

namespace trajeval::metrics {

namespace {

constexpr TaxonomyCell cell(Level level, Notion notion) { return {level, notion}; }

const ConstraintLayers& layers_of(const EvaluationContext& ctx) {
  if (ctx.layers == nullptr || ctx.layers->empty()) throw Error("metric needs constraint layers (--layers)");
  return *ctx.layers;
}

std::size_t count_param(const MetricParams& p, const char* key) {
  const double v = p.at(key);
  if (!(v >= 1.0) || v != std::floor(v)) throw Error(std::string(key) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<MetricInfo> build_registry() {
  using L = Level;
  using N = Notion;
  const auto lower = Direction::LowerIsBetter;
  const auto higher = Direction::HigherIsBetter;
  std::vector<MetricInfo> r;
  auto add = [&](MetricInfo info) { r.push_back(std::move(info)); };

  add({"average_speed", "Average speed", cell(L::Trajectory, N::MarginalStatistics), lower, "W1 (km/h)", false,
       false, false, {},
       [](const EvaluationContext& c, const MetricParams&) { return average_speed(c.real, c.syn); }});
  add({"traveled_distance", "Traveled distance", cell(L::Trajectory, N::MarginalStatistics), lower, "W1 (km)",
       false, false, false, {},
       [](const EvaluationContext& c, const MetricParams&) { return traveled_distance(c.real, c.syn); }});
  add({"i_rank", "I-rank", cell(L::Trajectory, N::MarginalStatistics), lower, "W1", true, false, false, {},
       [](const EvaluationContext& c, const MetricParams&) { return i_rank(c.real_grid, c.syn_grid); }});
  add({"od_spatial_density", "Origin/destination spatial density", cell(L::Trajectory, N::MarginalStatistics),
       lower, "W1", true, false, false, {}, {}});
  add({"waiting_time", "Waiting time distribution", cell(L::Trajectory, N::MarginalStatistics), lower, "W1",
       false, false, false, {}, {}});

  auto pairwise = [&](const char* id, const char* label, PairwiseKind kind, const char* unit, bool categories) {
    add({id, label, cell(L::Trajectory, N::RelationalStatistics), lower, unit, false, false, categories, {},
         [kind](const EvaluationContext& c, const MetricParams&) { return pairwise_similarity(c.real, c.syn, kind); }});
  };
  pairwise("pairwise_hausdorff", "Pairwise Hausdorff", PairwiseKind::Hausdorff, "W1 (km)", false);
  pairwise("pairwise_frechet", "Pairwise Frechet", PairwiseKind::Frechet, "W1 (km)", false);
  pairwise("pairwise_dtw", "Pairwise DTW", PairwiseKind::Dtw, "W1 (km)", false);
  pairwise("pairwise_cosine", "Cosine similarity", PairwiseKind::Cosine, "W1", true);

  add({"trajectory_implausibility", "Trajectory implausibility", cell(L::Trajectory, N::Realism), lower, "ratio",
       false, true, false, {{"delta_m", kDefaultToleranceM}},
       [](const EvaluationContext& c, const MetricParams& p) {
         return trajectory_implausibility(c.syn, layers_of(c), p.at("delta_m"));
       }});
  add({"map_reconstruction", "Map reconstruction", cell(L::Trajectory, N::Realism), lower, "mean km", false, true,
       false, {},
       [](const EvaluationContext& c, const MetricParams&) { return map_reconstruction(c.real, c.syn, layers_of(c)); }});
  add({"reachability", "Reachability", cell(L::Trajectory, N::Realism), lower, "ratio", false, true, false, {}, {}});
  add({"time_reversal_ratio", "Time reversal ratio", cell(L::Trajectory, N::Realism), lower, "ratio", false, false,
       false, {}, {}});

  add({"next_location_prediction", "Next location prediction", cell(L::Trajectory, N::TaskPerformance), higher,
       "mean acc", true, false, false, {{"k", 10}},
       [](const EvaluationContext& c, const MetricParams& p) {
         return next_location_prediction(build_transition_matrix(c.syn_grid), c.real_grid, count_param(p, "k"));
       }});
  add({"trajectory_clustering", "Trajectory clustering", cell(L::Trajectory, N::TaskPerformance), higher,
       "silhouette", false, false, false, {{"eps_m", 1000.0}, {"min_points", 5}},
       [](const EvaluationContext& c, const MetricParams& p) {
         return trajectory_clustering(c.syn, c.real, {p.at("eps_m"), count_param(p, "min_points")});
       }});

  add({"g_rank", "G-rank", cell(L::Point, N::MarginalStatistics), higher, "tau_b", true, false, false, {},
       [](const EvaluationContext& c, const MetricParams&) { return g_rank(c.real_grid, c.syn_grid); }});
  add({"categorical_g_rank", "Categorical G-rank", cell(L::Point, N::MarginalStatistics), higher, "tau_b", false,
       false, true, {},
       [](const EvaluationContext& c, const MetricParams&) { return categorical_g_rank(c.real, c.syn); }});
  add({"temporal_activity", "Temporal activity distribution", cell(L::Point, N::MarginalStatistics), lower, "W1",
       false, false, false, {}, {}});

  add({"transition_probabilities", "Transition probabilities", cell(L::Point, N::RelationalStatistics), lower, "W1",
       true, false, false, {},
       [](const EvaluationContext& c, const MetricParams&) { return transition_probabilities(c.real_grid, c.syn_grid); }});
  add({"spatial_cooccurrence", "Spatial co-occurrence", cell(L::Point, N::RelationalStatistics), lower, "W1", true,
       false, false, {}, {}});

  add({"location_implausibility", "Location implausibility", cell(L::Point, N::Realism), lower, "ratio", false, true,
       false, {{"delta_m", kDefaultToleranceM}},
       [](const EvaluationContext& c, const MetricParams& p) {
         return location_implausibility(c.syn, layers_of(c), p.at("delta_m"));
       }});
  add({"category_location_match", "Category-location match", cell(L::Point, N::Realism), higher, "ratio", true,
       false, true, {{"k_min", 5}, {"dominance", 0.5}},
       [](const EvaluationContext& c, const MetricParams& p) {
         return category_location_match(c.real_grid, c.syn_grid, {p.at("k_min"), p.at("dominance")});
       }});

  add({"global_flow_prediction", "Global flow prediction", cell(L::Point, N::TaskPerformance), lower, "mean W1",
       true, false, false, {},
       [](const EvaluationContext& c, const MetricParams&) {
         return global_flow_prediction(build_transition_matrix(c.syn_grid), c.real_grid);
       }});
  add({"crowd_density_prediction", "Crowd density prediction", cell(L::Point, N::TaskPerformance), lower, "W1",
       true, false, false, {}, {}});
  return r;
}

}  // namespace

const std::vector<MetricInfo>& metric_registry() {
  static const std::vector<MetricInfo> registry = build_registry();
  return registry;
}

const MetricInfo& find_metric(const std::string& id) {
  for (const auto& m : metric_registry()) {
    if (m.id == id) return m;
  }
  std::string known;
  for (const auto& m : metric_registry()) known += (known.empty() ? "" : ", ") + m.id;
  throw Error("unknown metric '" + id + "' (known: " + known + ")");
}

MetricParams resolve_params(const MetricInfo& info, const MetricParams& overrides) {
  MetricParams params = info.defaults;
  for (const auto& [key, value] : overrides) {
    auto it = params.find(key);
    if (it == params.end()) throw Error("metric '" + info.id + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw Error("parameter '" + key + "' must be finite");
    it->second = value;
  }
  return params;
}

MetricResult evaluate_metric(const MetricInfo& info, const EvaluationContext& context, const MetricParams& overrides) {
  MetricResult result;
  result.metric = info.id;
  result.cell = info.cell;
  result.direction = info.direction;
  result.unit = info.unit;
  if (!info.implemented()) {
    result.status = Status::Failed;
    result.note = "metric not implemented";
    return result;
  }
  try {
    const auto value = info.evaluate(context, resolve_params(info, overrides));
    result.value = value.value;
    result.excluded = value.excluded;
    result.note = value.note;
    result.status = Status::Ok;
  } catch (const Inapplicable& e) {
    result.status = Status::Inapplicable;
    result.note = e.what();
  } catch (const std::exception& e) {
    result.status = Status::Failed;
    result.note = e.what();
  }
  return result;
}

}  // namespace trajeval::metrics
