#include "trajeval/metrics/statistics.hpp"

#include <cmath>
#include <map>

#include "trajeval/measures/trajectory_distance.hpp"
#include "trajeval/measures/wasserstein.hpp"
#include "trajeval/parallel.hpp"

namespace trajeval::metrics {

using grid::CellId;
using mobility::Dataset;

std::optional<double> trajectory_average_speed_kmh(const mobility::Trajectory& t) {
  double total = 0.0;
  std::size_t steps = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dt = t.points[i].timestamp - t.points[i - 1].timestamp;
    if (dt <= 0.0) continue;
    total += distance(t.points[i - 1].point.position, t.points[i].point.position) / dt;
    ++steps;
  }
  if (steps == 0) return std::nullopt;
  return total / static_cast<double>(steps) * 3.6;
}

double trajectory_traveled_km(const mobility::Trajectory& t) {
  double total = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    total += distance(t.points[i - 1].point.position, t.points[i].point.position);
  }
  return total / 1000.0;
}

namespace {

struct Sample {
  std::vector<double> values;
  std::size_t excluded = 0;
};

Sample speeds(const Dataset& d) {
  Sample s;
  for (const auto& t : d.trajectories()) {
    if (auto v = trajectory_average_speed_kmh(t)) {
      s.values.push_back(*v);
    } else {
      ++s.excluded;
    }
  }
  return s;
}

MetricValue compare_samples(const Sample& real, const Sample& syn, const char* what) {
  if (real.values.empty()) throw Inapplicable(std::string("real dataset has no defined ") + what);
  if (syn.values.empty()) throw Inapplicable(std::string("synthetic dataset has no defined ") + what);
  MetricValue out;
  out.value = measures::wasserstein1_samples(real.values, syn.values);
  out.excluded = real.excluded + syn.excluded;
  return out;
}

}  // namespace

MetricValue average_speed(const Dataset& real, const Dataset& syn) {
  return compare_samples(speeds(real), speeds(syn), "average speed");
}

MetricValue traveled_distance(const Dataset& real, const Dataset& syn) {
  Sample a, b;
  for (const auto& t : real.trajectories()) a.values.push_back(trajectory_traveled_km(t));
  for (const auto& t : syn.trajectories()) b.values.push_back(trajectory_traveled_km(t));
  return compare_samples(a, b, "traveled distance");
}

IndividualRankScores individual_rank_scores(const grid::DiscretizedDataset& data) {
  std::map<std::string, std::map<CellId, double>> visits;
  for (const auto& t : data.trajectories) {
    auto& counts = visits[t.user_id];
    for (const auto& c : t.cells) counts[c] += 1.0;
  }
  IndividualRankScores out;
  for (const auto& [user, counts] : visits) {
    const auto by_frequency = measures::RankVector<CellId>::from_frequencies(counts);
    measures::RankVector<CellId> by_index;
    double position = 1.0;
    for (const auto& [cell, n] : counts) {
      by_index.items.push_back(cell);
      by_index.ranks.push_back(position);
      position += 1.0;
    }
    if (counts.size() < 2) {
      ++out.excluded;
      continue;
    }
    const auto tc = measures::tau_counts(measures::align_rankings(by_frequency, by_index));
    if (tc.ties_x == tc.n0 || tc.ties_y == tc.n0) {
      ++out.excluded;
      continue;
    }
    out.scores.push_back((1.0 - measures::tau_b_from_counts(tc)) / 2.0);
  }
  return out;
}

MetricValue i_rank(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn) {
  const auto a = individual_rank_scores(real);
  const auto b = individual_rank_scores(syn);
  return compare_samples({a.scores, a.excluded}, {b.scores, b.excluded}, "individual rank score");
}

PairwiseKind pairwise_kind_from_string(const std::string& text) {
  if (text == "hausdorff") return PairwiseKind::Hausdorff;
  if (text == "frechet") return PairwiseKind::Frechet;
  if (text == "dtw") return PairwiseKind::Dtw;
  if (text == "cosine") return PairwiseKind::Cosine;
  throw Error("unknown pairwise distance kind '" + text + "'");
}

PairwiseDistances intra_dataset_distances(const Dataset& data, PairwiseKind kind) {
  PairwiseDistances out;
  std::vector<std::vector<Point2>> shapes;
  std::vector<std::vector<double>> embeddings;
  if (kind == PairwiseKind::Cosine) {
    const std::size_t dims = data.vocabulary().size();
    for (const auto& t : data.trajectories()) {
      std::vector<double> v(dims, 0.0);
      bool any = false;
      for (const auto& p : t.points) {
        if (p.category) {
          v[*p.category] += 1.0;
          any = true;
        }
      }
      if (any) {
        embeddings.push_back(std::move(v));
      } else {
        ++out.excluded;
      }
    }
  } else {
    for (const auto& t : data.trajectories()) shapes.push_back(t.positions());
  }
  const std::size_t n = kind == PairwiseKind::Cosine ? embeddings.size() : shapes.size();
  if (n < 2) throw Inapplicable("pairwise distances need at least two trajectories");
  out.distances.assign(n * (n - 1) / 2, 0.0);
  parallel_for(n - 1, [&](std::size_t i) {
    std::size_t slot = i * (2 * n - i - 1) / 2;
    for (std::size_t j = i + 1; j < n; ++j, ++slot) {
      double d = 0.0;
      switch (kind) {
        case PairwiseKind::Hausdorff: d = measures::hausdorff(shapes[i], shapes[j]) / 1000.0; break;
        case PairwiseKind::Frechet: d = measures::discrete_frechet(shapes[i], shapes[j]) / 1000.0; break;
        case PairwiseKind::Dtw: d = measures::dtw(shapes[i], shapes[j]) / 1000.0; break;
        case PairwiseKind::Cosine: d = measures::cosine_distance(embeddings[i], embeddings[j]); break;
      }
      out.distances[slot] = d;
    }
  });
  return out;
}

MetricValue pairwise_similarity(const Dataset& real, const Dataset& syn, PairwiseKind kind) {
  auto a = intra_dataset_distances(real, kind);
  auto b = intra_dataset_distances(syn, kind);
  return compare_samples({std::move(a.distances), a.excluded}, {std::move(b.distances), b.excluded},
                         "pairwise distance");
}

measures::RankVector<CellId> global_rank(const grid::DiscretizedDataset& data) {
  std::map<CellId, double> counts;
  for (const auto& t : data.trajectories) {
    for (const auto& c : t.cells) counts[c] += 1.0;
  }
  return measures::RankVector<CellId>::from_frequencies(counts);
}

namespace {

template <typename Key>
MetricValue rank_agreement(const measures::RankVector<Key>& a, const measures::RankVector<Key>& b) {
  if (a.items.empty() || b.items.empty()) throw Inapplicable("ranking over an empty support");
  auto pairs = measures::align_rankings(a, b);
  if (pairs.size() < 2) throw Inapplicable("tau-b needs at least two ranked items");
  const auto tc = measures::tau_counts(std::move(pairs));
  if (tc.ties_x == tc.n0 || tc.ties_y == tc.n0) throw Inapplicable("tau-b undefined: a ranking is entirely tied");
  return {measures::tau_b_from_counts(tc), 0, {}};
}

}  // namespace

MetricValue g_rank(const grid::DiscretizedDataset& real, const grid::DiscretizedDataset& syn) {
  return rank_agreement(global_rank(real), global_rank(syn));
}

measures::RankVector<std::string> category_rank(const Dataset& data) {
  std::map<std::string, double> counts;
  for (const auto& t : data.trajectories()) {
    for (const auto& p : t.points) {
      if (p.category) counts[data.vocabulary().label(*p.category)] += 1.0;
    }
  }
  return measures::RankVector<std::string>::from_frequencies(counts);
}

MetricValue categorical_g_rank(const Dataset& real, const Dataset& syn) {
  if (!real.has_categories() || !syn.has_categories()) throw Inapplicable("dataset carries no categories");
  return rank_agreement(category_rank(real), category_rank(syn));
}

}  // namespace trajeval::metrics
