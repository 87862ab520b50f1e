#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "trajeval/error.hpp"

namespace trajeval::measures {

/// Ranking of items; rank 1 is the top, equal ranks are ties.
template <typename Key>
struct RankVector {
  std::vector<Key> items;
  std::vector<double> ranks;

  /// Competition ranking by descending frequency (1, 2, 2, 4, ...).
  static RankVector from_frequencies(const std::map<Key, double>& counts) {
    std::vector<std::pair<double, Key>> sorted;
    for (const auto& [k, c] : counts) sorted.emplace_back(c, k);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    RankVector r;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double rank = (i > 0 && sorted[i].first == sorted[i - 1].first) ? r.ranks.back()
                                                                           : static_cast<double>(i + 1);
      r.items.push_back(sorted[i].second);
      r.ranks.push_back(rank);
    }
    return r;
  }
};

/// Tie-aware pair counts behind tau-b.
struct TauCounts {
  std::int64_t n0 = 0;          // all pairs
  std::int64_t numerator = 0;   // concordant - discordant
  std::int64_t ties_x = 0;      // pairs tied in x (joint ties included)
  std::int64_t ties_y = 0;
};

/// O(n log n) pair counting (Knight's algorithm) over paired ranks.
TauCounts tau_counts(std::vector<std::pair<double, double>> pairs);

/// tau-b from pair counts; throws when a side is entirely tied.
double tau_b_from_counts(const TauCounts& counts);

/// Pairs the two rankings over the union of their items. Items missing from
/// one side share a single bottom rank on that side.
template <typename Key>
std::vector<std::pair<double, double>> align_rankings(const RankVector<Key>& x, const RankVector<Key>& y) {
  if (x.items.size() != x.ranks.size() || y.items.size() != y.ranks.size()) {
    throw Error("rank vector items and ranks differ in length");
  }
  std::map<Key, std::pair<std::optional<double>, std::optional<double>>> merged;
  double bottom_x = 0.0, bottom_y = 0.0;
  for (std::size_t i = 0; i < x.items.size(); ++i) {
    merged[x.items[i]].first = x.ranks[i];
    bottom_x = std::max(bottom_x, x.ranks[i]);
  }
  for (std::size_t i = 0; i < y.items.size(); ++i) {
    merged[y.items[i]].second = y.ranks[i];
    bottom_y = std::max(bottom_y, y.ranks[i]);
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(merged.size());
  for (const auto& [key, r] : merged) pairs.emplace_back(r.first.value_or(bottom_x + 1.0), r.second.value_or(bottom_y + 1.0));
  return pairs;
}

template <typename Key>
double kendall_tau_b(const RankVector<Key>& x, const RankVector<Key>& y) {
  auto pairs = align_rankings(x, y);
  if (pairs.size() < 2) throw Error("tau-b needs at least two items");
  return tau_b_from_counts(tau_counts(std::move(pairs)));
}

}  // namespace trajeval::measures
