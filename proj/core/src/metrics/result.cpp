#include "trajeval/metrics/result.hpp"

namespace trajeval::metrics {

std::string to_string(Level level) { return level == Level::Trajectory ? "trajectory" : "point"; }

std::string to_string(Notion notion) {
  switch (notion) {
    case Notion::MarginalStatistics: return "marginal";
    case Notion::RelationalStatistics: return "relational";
    case Notion::Realism: return "realism";
    case Notion::TaskPerformance: return "task";
  }
  return "unknown";
}

std::string to_string(const TaxonomyCell& cell) { return to_string(cell.level) + "/" + to_string(cell.notion); }

std::string to_string(Direction direction) {
  return direction == Direction::LowerIsBetter ? "lower_is_better" : "higher_is_better";
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::Inapplicable: return "inapplicable";
    case Status::Failed: return "failed";
  }
  return "unknown";
}

Level level_from_string(const std::string& text) {
  if (text == "trajectory") return Level::Trajectory;
  if (text == "point") return Level::Point;
  throw Error("unknown taxonomy level '" + text + "'");
}

Notion notion_from_string(const std::string& text) {
  if (text == "marginal") return Notion::MarginalStatistics;
  if (text == "relational") return Notion::RelationalStatistics;
  if (text == "realism") return Notion::Realism;
  if (text == "task") return Notion::TaskPerformance;
  throw Error("unknown utility notion '" + text + "'");
}

Direction direction_from_string(const std::string& text) {
  if (text == "lower_is_better") return Direction::LowerIsBetter;
  if (text == "higher_is_better") return Direction::HigherIsBetter;
  throw Error("unknown direction '" + text + "'");
}

Status status_from_string(const std::string& text) {
  if (text == "ok") return Status::Ok;
  if (text == "inapplicable") return Status::Inapplicable;
  if (text == "failed") return Status::Failed;
  throw Error("unknown status '" + text + "'");
}

}  // namespace trajeval::metrics
