#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trajeval/framework/selection.hpp"
#include "trajeval/grid/grid.hpp"
#include "trajeval/metrics/realism.hpp"
#include "trajeval/metrics/result.hpp"
#include "trajeval/mobility/types.hpp"

namespace trajeval::framework {

/// Shared context for a set of evaluations against one real dataset.
struct EvaluationEnvironment {
  grid::GridSpec grid;
  const metrics::ConstraintLayers* layers = nullptr;
};

/// Uses `grid` when given, otherwise selects the cell size from `real`.
grid::GridSpec derive_grid(const mobility::Dataset& real, const std::optional<grid::GridSpec>& grid = {});

/// One score per selected metric, in selection order.
struct UtilityVector {
  std::string model;
  std::vector<metrics::MetricResult> entries;
  friend bool operator==(const UtilityVector&, const UtilityVector&) = default;
};

/// Evaluates every selected metric. Metric-level failures are recorded in
/// the entry status; an invalid selection or a missing environment throws.
UtilityVector assemble_utility_vector(const mobility::Dataset& real, const mobility::Dataset& syn,
                                      const MetricSelection& selection, const EvaluationEnvironment& env,
                                      const std::string& model = "synthetic");

struct MetricColumn {
  std::string id;
  std::string label;
  metrics::TaxonomyCell cell;
  metrics::Direction direction = metrics::Direction::LowerIsBetter;
  std::string unit;
  friend bool operator==(const MetricColumn&, const MetricColumn&) = default;
};

struct ModelRow {
  UtilityVector vector;
  std::vector<bool> best;  // per metric column
  std::size_t best_count = 0;
  friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

struct UtilityReport {
  std::string selection;
  std::optional<grid::GridSpec> grid;
  std::vector<MetricColumn> columns;
  std::optional<UtilityVector> original;
  std::vector<ModelRow> models;
  friend bool operator==(const UtilityReport&, const UtilityReport&) = default;
};

std::vector<MetricColumn> columns_for(const MetricSelection& selection);

/// Marks, per column, every model whose value is the best under the column
/// direction (ties all marked) and counts the marks per model. The original
/// row is carried along but never marked.
UtilityReport compare_models(std::vector<MetricColumn> columns, std::vector<UtilityVector> models,
                             std::optional<UtilityVector> original = {});

/// Runs the selection for the identity pair (real, real) and each model.
UtilityReport evaluate_models(const mobility::Dataset& real,
                              const std::vector<std::pair<std::string, mobility::Dataset>>& models,
                              const MetricSelection& selection, const EvaluationEnvironment& env,
                              bool include_original = true);

/// True when some entry of the report is not `ok`.
bool has_failures(const UtilityReport& report);

enum class ReportFormat { Json, Csv, Svg };
ReportFormat report_format_from_string(const std::string& text);
std::string extension(ReportFormat format);

std::string report_to_json(const UtilityReport& report);
UtilityReport report_from_json(const std::string& text);
/// One row per (model, metric); the original row comes first.
std::string report_to_csv(const UtilityReport& report);
/// Table with one block per taxonomy level and bold best entries.
std::string report_to_svg(const UtilityReport& report);

std::string render_report(const UtilityReport& report, ReportFormat format);
void emit_report(const UtilityReport& report, ReportFormat format, const std::filesystem::path& path);

/// Three decimals; positive values below 0.0005 print as "<0.001".
std::string format_value(const metrics::MetricResult& entry);

}  // namespace trajeval::framework
