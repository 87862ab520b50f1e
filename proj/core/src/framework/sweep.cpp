#include "trajeval/framework/sweep.hpp"

namespace trajeval::framework {

std::vector<std::string> grid_metric_ids(const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) {
    const auto& info = metrics::find_metric(id);
    if (info.grid_based && info.implemented()) out.push_back(id);
  }
  return out;
}

std::vector<grid::SweepMetric> sweep_metrics(const mobility::Dataset& real, const mobility::Dataset& syn,
                                             const std::vector<std::string>& ids,
                                             const metrics::ConstraintLayers* layers) {
  std::vector<grid::SweepMetric> out;
  for (const auto& id : ids) {
    const auto& info = metrics::find_metric(id);
    if (!info.grid_based || !info.implemented()) throw Error("metric '" + id + "' is not grid-dependent");
    out.push_back({id, [&info, &real, &syn, layers](const grid::DiscretizedDataset& dr,
                                                      const grid::DiscretizedDataset& ds) {
                     const metrics::EvaluationContext ctx{real, syn, dr, ds, layers};
                     return info.evaluate(ctx, info.defaults).value;
                   }});
  }
  return out;
}

std::vector<grid::SweepRow> run_stability_sweep(const mobility::Dataset& real, const mobility::Dataset& syn,
                                                const std::vector<std::string>& ids,
                                                const grid::SweepOptions& options) {
  return grid::stability_sweep(real, syn, sweep_metrics(real, syn, ids), options);
}

}  // namespace trajeval::framework
