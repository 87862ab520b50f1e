#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "trajeval/error.hpp"

namespace trajeval::metrics {

enum class Level { Trajectory, Point };
enum class Notion { MarginalStatistics, RelationalStatistics, Realism, TaskPerformance };

struct TaxonomyCell {
  Level level = Level::Trajectory;
  Notion notion = Notion::MarginalStatistics;
  friend bool operator==(const TaxonomyCell&, const TaxonomyCell&) = default;
  friend auto operator<=>(const TaxonomyCell&, const TaxonomyCell&) = default;
};

enum class Direction { LowerIsBetter, HigherIsBetter };
enum class Status { Ok, Inapplicable, Failed };

std::string to_string(Level level);
std::string to_string(Notion notion);
std::string to_string(const TaxonomyCell& cell);
std::string to_string(Direction direction);
std::string to_string(Status status);
Level level_from_string(const std::string& text);
Notion notion_from_string(const std::string& text);
Direction direction_from_string(const std::string& text);
Status status_from_string(const std::string& text);

/// Raw outcome of a metric computation.
struct MetricValue {
  double value = 0.0;
  std::size_t excluded = 0;  // records skipped as undefined for this metric
  std::string note;
};

struct MetricResult {
  std::string metric;
  TaxonomyCell cell;
  Direction direction = Direction::LowerIsBetter;
  std::optional<double> value;
  std::string unit;
  Status status = Status::Ok;
  std::string note;
  std::size_t excluded = 0;

  friend bool operator==(const MetricResult&, const MetricResult&) = default;
};

/// Raised when a metric is undefined for the given inputs (rendered N/A).
class Inapplicable : public Error {
 public:
  using Error::Error;
};

}  // namespace trajeval::metrics
