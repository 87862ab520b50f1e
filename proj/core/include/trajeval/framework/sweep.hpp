#pragma once

#include <string>
#include <vector>

#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/registry.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::framework {

/// Ids of the grid-dependent metrics among `ids`, in order.
std::vector<std::string> grid_metric_ids(const std::vector<std::string>& ids);

/// Sweep metrics backed by the registry. Every id must name an implemented
/// grid-dependent metric.
std::vector<grid::SweepMetric> sweep_metrics(const mobility::Dataset& real, const mobility::Dataset& syn,
                                             const std::vector<std::string>& ids,
                                             const metrics::ConstraintLayers* layers = nullptr);

std::vector<grid::SweepRow> run_stability_sweep(const mobility::Dataset& real, const mobility::Dataset& syn,
                                                const std::vector<std::string>& ids,
                                                const grid::SweepOptions& options = {});

}  // namespace trajeval::framework
