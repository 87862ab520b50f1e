#include "trajeval/framework/selection.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

namespace trajeval::framework {

using metrics::Level;
using metrics::Notion;
using nlohmann::ordered_json;

std::vector<std::string> preset_names() { return {"use-case-a", "use-case-b"}; }

MetricSelection preset(const std::string& name) {
  auto make = [&](std::vector<std::string> ids) {
    MetricSelection s{name, {}};
    for (auto& id : ids) s.metrics.push_back({std::move(id), {}});
    return s;
  };
  if (name == "use-case-a") {
    return make({"i_rank", "pairwise_cosine", "trajectory_implausibility", "trajectory_clustering",
                 "categorical_g_rank", "transition_probabilities", "category_location_match",
                 "global_flow_prediction"});
  }
  if (name == "use-case-b") {
    return make({"average_speed", "pairwise_hausdorff", "map_reconstruction", "next_location_prediction", "g_rank",
                 "transition_probabilities", "location_implausibility", "global_flow_prediction"});
  }
  std::string known;
  for (const auto& p : preset_names()) known += (known.empty() ? "" : ", ") + p;
  throw Error("unknown preset '" + name + "' (available: " + known + ")");
}

void canonicalize(MetricSelection& selection) {
  std::stable_sort(selection.metrics.begin(), selection.metrics.end(), [](const auto& a, const auto& b) {
    return metrics::find_metric(a.metric).cell < metrics::find_metric(b.metric).cell;
  });
}

MetricSelection selection_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(std::string("selection config: ") + e.what());
  }
  if (!j.is_object() || !j.contains("cells") || !j["cells"].is_object()) {
    throw Error("selection config needs a 'cells' object");
  }
  MetricSelection s;
  s.name = j.value("name", "custom");
  for (const auto& [level_name, notions] : j["cells"].items()) {
    const auto level = metrics::level_from_string(level_name);
    if (!notions.is_object()) throw Error("selection config: '" + level_name + "' must map notions to metrics");
    for (const auto& [notion_name, chosen] : notions.items()) {
      const auto notion = metrics::notion_from_string(notion_name);
      if (!chosen.is_object()) throw Error("selection config: metrics of a cell must be an object of id -> params");
      for (const auto& [id, params] : chosen.items()) {
        const auto& info = metrics::find_metric(id);
        if (info.cell != metrics::TaxonomyCell{level, notion}) {
          throw Error("metric '" + id + "' belongs to cell " + metrics::to_string(info.cell) + ", not " +
                      level_name + "/" + notion_name);
        }
        MetricChoice choice{id, {}};
        if (!params.is_null()) {
          if (!params.is_object()) throw Error("parameters of '" + id + "' must be an object");
          for (const auto& [key, value] : params.items()) {
            if (!value.is_number()) throw Error("parameter '" + key + "' of '" + id + "' must be a number");
            choice.params[key] = value.get<double>();
          }
        }
        s.metrics.push_back(std::move(choice));
      }
    }
  }
  canonicalize(s);
  return s;
}

std::string selection_to_json(const MetricSelection& selection) {
  ordered_json cells = ordered_json::object();
  for (const auto& choice : selection.metrics) {
    const auto& info = metrics::find_metric(choice.metric);
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : choice.params) params[k] = v;
    cells[metrics::to_string(info.cell.level)][metrics::to_string(info.cell.notion)][choice.metric] = params;
  }
  ordered_json j;
  j["name"] = selection.name;
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

void validate_selection(const MetricSelection& selection) {
  std::set<metrics::TaxonomyCell> covered;
  std::set<std::string> seen;
  for (const auto& choice : selection.metrics) {
    const auto& info = metrics::find_metric(choice.metric);
    if (!info.implemented()) throw Error("metric '" + choice.metric + "' is not implemented");
    if (!seen.insert(choice.metric).second) throw Error("metric '" + choice.metric + "' selected twice");
    metrics::resolve_params(info, choice.params);
    covered.insert(info.cell);
  }
  for (auto level : {Level::Trajectory, Level::Point}) {
    for (auto notion : {Notion::MarginalStatistics, Notion::RelationalStatistics, Notion::Realism,
                        Notion::TaskPerformance}) {
      if (!covered.count({level, notion})) {
        throw Error("selection has no metric for cell " + metrics::to_string(metrics::TaxonomyCell{level, notion}));
      }
    }
  }
}

}  // namespace trajeval::framework
