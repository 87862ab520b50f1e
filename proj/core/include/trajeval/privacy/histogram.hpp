#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajeval/privacy/mia.hpp"

namespace trajeval::privacy {

struct HistogramBin {
  std::string series;
  double start = 0.0;
  double end = 0.0;
  std::size_t count = 0;
  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct ScoreHistogram {
  std::vector<HistogramBin> bins;
  std::optional<double> threshold;
};

/// Member and non-member score distributions on a shared binning.
ScoreHistogram score_histogram(const ThresholdModel& tm, std::size_t bins = 20);

/// series,bin_start,bin_end,count; the threshold is a row with series
/// "threshold" and bin_start = bin_end = tau.
std::string histogram_to_csv(const ScoreHistogram& h);
ScoreHistogram histogram_from_csv(const std::string& text);

/// Overlaid bars per series with a vertical threshold marker.
std::string histogram_to_svg(const ScoreHistogram& h);

}  // namespace trajeval::privacy
