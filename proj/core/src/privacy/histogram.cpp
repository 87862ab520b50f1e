#include "trajeval/privacy/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <sstream>

#include "trajeval/error.hpp"

namespace trajeval::privacy {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

double parse_number(const std::string& cell, std::size_t row, const char* column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw Error(fmt::format("histogram row {}: bad {} '{}'", row, column, cell));
  }
}

}  // namespace

ScoreHistogram score_histogram(const ThresholdModel& tm, std::size_t bins) {
  if (bins == 0) throw Error("histogram needs at least one bin");
  std::vector<double> all = tm.member_scores;
  all.insert(all.end(), tm.non_member_scores.begin(), tm.non_member_scores.end());
  if (all.empty()) throw Error("histogram of no scores");
  const auto [lo_it, hi_it] = std::minmax_element(all.begin(), all.end());
  const double lo = *lo_it;
  const double width = *hi_it > lo ? (*hi_it - lo) / static_cast<double>(bins) : 1.0;

  ScoreHistogram h;
  auto add_series = [&](const std::string& name, const std::vector<double>& scores) {
    std::vector<std::size_t> counts(bins, 0);
    for (double s : scores) {
      auto b = static_cast<std::size_t>(std::floor((s - lo) / width));
      ++counts[std::min(b, bins - 1)];
    }
    for (std::size_t b = 0; b < bins; ++b)
      h.bins.push_back({name, lo + width * static_cast<double>(b),
                        lo + width * static_cast<double>(b + 1), counts[b]});
  };
  add_series("member", tm.member_scores);
  add_series("non_member", tm.non_member_scores);
  h.threshold = tm.tau;
  return h;
}

std::string histogram_to_csv(const ScoreHistogram& h) {
  std::string out = "series,bin_start,bin_end,count\n";
  for (const auto& b : h.bins) out += fmt::format("{},{:.6f},{:.6f},{}\n", b.series, b.start, b.end, b.count);
  if (h.threshold) out += fmt::format("threshold,{0:.6f},{0:.6f},0\n", *h.threshold);
  return out;
}

ScoreHistogram histogram_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "series,bin_start,bin_end,count")
    throw Error("histogram row 1: expected header series,bin_start,bin_end,count");
  ScoreHistogram h;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw Error(fmt::format("histogram row {}: expected 4 columns, got {}", row, cells.size()));
    const double start = parse_number(cells[1], row, "bin_start");
    const double end = parse_number(cells[2], row, "bin_end");
    const double count = parse_number(cells[3], row, "count");
    if (count < 0 || count != std::floor(count))
      throw Error(fmt::format("histogram row {}: count must be a non-negative integer", row));
    if (cells[0] == "threshold") {
      h.threshold = start;
      continue;
    }
    if (cells[0].empty()) throw Error(fmt::format("histogram row {}: empty series", row));
    if (end < start) throw Error(fmt::format("histogram row {}: bin_end precedes bin_start", row));
    h.bins.push_back({cells[0], start, end, static_cast<std::size_t>(count)});
  }
  if (h.bins.empty()) throw Error("histogram has no bins");
  return h;
}

std::string histogram_to_svg(const ScoreHistogram& h) {
  if (h.bins.empty()) throw Error("histogram has no bins");
  constexpr double W = 640, H = 360, L = 50, R = 20, T = 20, B = 40;
  double lo = h.bins.front().start, hi = h.bins.front().end;
  std::size_t peak = 1;
  std::vector<std::string> series;
  for (const auto& b : h.bins) {
    lo = std::min(lo, b.start);
    hi = std::max(hi, b.end);
    peak = std::max(peak, b.count);
    if (std::find(series.begin(), series.end(), b.series) == series.end()) series.push_back(b.series);
  }
  if (h.threshold) {
    lo = std::min(lo, *h.threshold);
    hi = std::max(hi, *h.threshold);
  }
  if (hi <= lo) hi = lo + 1.0;
  auto x = [&](double v) { return L + (v - lo) / (hi - lo) * (W - L - R); };
  auto y = [&](double c) { return H - B - c / static_cast<double>(peak) * (H - T - B); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      W, H);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", L, H - B, W - R);
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", L, T, H - B);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{:.3f}</text>\n", L, H - B + 15, lo);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3f}</text>\n", W - R, H - B + 15, hi);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", L - 5, T + 10, peak);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    for (const auto& b : h.bins) {
      if (b.series != series[s] || b.count == 0) continue;
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" fill-opacity=\"0.5\"/>\n",
          x(b.start), y(static_cast<double>(b.count)), std::max(x(b.end) - x(b.start), 0.5),
          y(0.0) - y(static_cast<double>(b.count)), colour);
    }
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\" fill-opacity=\"0.5\"/>\n",
                       W - R - 120, T + 14.0 * static_cast<double>(s), colour);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", W - R - 105,
                       T + 9 + 14.0 * static_cast<double>(s), series[s]);
  }
  if (h.threshold) {
    const double tx = x(*h.threshold);
    out += fmt::format(
        "<line class=\"threshold\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"red\" "
        "stroke-dasharray=\"4 3\"/>\n",
        tx, T, H - B);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"red\">tau = {:.3f}</text>\n", tx + 4, T + 10,
                       *h.threshold);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace trajeval::privacy
