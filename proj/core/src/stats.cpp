#include "trajeval/stats.hpp"

#include <algorithm>
#include <cmath>

#include "trajeval/error.hpp"

namespace trajeval::stats {

double order_independent_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sample");
  return order_independent_sum({values.begin(), values.end()}) /
         static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  const double m = mean(values);
  std::vector<double> squares;
  squares.reserve(values.size());
  for (double v : values) squares.push_back((v - m) * (v - m));
  return std::sqrt(order_independent_sum(std::move(squares)) /
                   static_cast<double>(values.size()));
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("percentile of empty sample");
  if (q < 0.0 || q > 100.0) throw Error("percentile rank outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return percentile(std::move(values), 50.0); }

}  // namespace trajeval::stats
