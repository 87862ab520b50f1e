#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/realism.hpp"
#include "trajeval/metrics/result.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::metrics {

using MetricParams = std::map<std::string, double>;

/// Inputs shared by every metric of one (real, synthetic) evaluation.
struct EvaluationContext {
  const mobility::Dataset& real;
  const mobility::Dataset& syn;
  const grid::DiscretizedDataset& real_grid;
  const grid::DiscretizedDataset& syn_grid;
  const ConstraintLayers* layers = nullptr;
};

struct MetricInfo {
  std::string id;
  std::string label;
  TaxonomyCell cell;
  Direction direction = Direction::LowerIsBetter;
  std::string unit;
  bool grid_based = false;
  bool needs_layers = false;
  bool needs_categories = false;
  MetricParams defaults;  // accepted parameters with their default values
  std::function<MetricValue(const EvaluationContext&, const MetricParams&)> evaluate;

  bool implemented() const { return static_cast<bool>(evaluate); }
};

/// Every metric of the taxonomy, including listed-but-unimplemented ones.
const std::vector<MetricInfo>& metric_registry();

/// Throws, listing the known ids, when `id` is not registered.
const MetricInfo& find_metric(const std::string& id);

/// Defaults overridden by `overrides`; unknown keys are an error.
MetricParams resolve_params(const MetricInfo& info, const MetricParams& overrides);

/// Runs the metric and folds errors into the result status.
MetricResult evaluate_metric(const MetricInfo& info, const EvaluationContext& context,
                             const MetricParams& overrides = {});

}  // namespace trajeval::metrics
