#include "trajeval/measures/kendall.hpp"

#include <cmath>

namespace trajeval::measures {

namespace {

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Merge sort on the y values, counting inversions.
std::int64_t sort_and_count(std::vector<double>& y, std::vector<double>& buffer, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = sort_and_count(y, buffer, lo, mid) + sort_and_count(y, buffer, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (y[j] < y[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buffer[k++] = y[j++];
    } else {
      buffer[k++] = y[i++];
    }
  }
  while (i < mid) buffer[k++] = y[i++];
  while (j < hi) buffer[k++] = y[j++];
  std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo), buffer.begin() + static_cast<std::ptrdiff_t>(hi),
            y.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

TauCounts tau_counts(std::vector<std::pair<double, double>> pairs) {
  const auto n = static_cast<std::int64_t>(pairs.size());
  std::sort(pairs.begin(), pairs.end());
  std::int64_t n1 = 0, n3 = 0;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j < pairs.size() && pairs[j].first == pairs[i].first) ++j;
    n1 += tied_pairs(static_cast<std::int64_t>(j - i));
    for (std::size_t k = i; k < j;) {
      std::size_t l = k;
      while (l < j && pairs[l].second == pairs[k].second) ++l;
      n3 += tied_pairs(static_cast<std::int64_t>(l - k));
      k = l;
    }
    i = j;
  }
  std::vector<double> y(pairs.size()), buffer(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) y[i] = pairs[i].second;
  const std::int64_t swaps = sort_and_count(y, buffer, 0, y.size());
  std::int64_t n2 = 0;
  for (std::size_t i = 0; i < y.size();) {
    std::size_t j = i;
    while (j < y.size() && y[j] == y[i]) ++j;
    n2 += tied_pairs(static_cast<std::int64_t>(j - i));
    i = j;
  }
  TauCounts counts;
  counts.n0 = tied_pairs(n);
  counts.ties_x = n1;
  counts.ties_y = n2;
  counts.numerator = counts.n0 - n1 - n2 + n3 - 2 * swaps;
  return counts;
}

double tau_b_from_counts(const TauCounts& counts) {
  const std::int64_t dx = counts.n0 - counts.ties_x;
  const std::int64_t dy = counts.n0 - counts.ties_y;
  if (dx == 0 || dy == 0) throw Error("tau-b undefined: one ranking is entirely tied");
  return static_cast<double>(counts.numerator) / std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
}

}  // namespace trajeval::measures
