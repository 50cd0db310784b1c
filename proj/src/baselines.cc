#include "pairrank/baselines.h"

#include <algorithm>
#include <numeric>

namespace pairrank {

void BaselineConfig::Validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("baseline.epsilon must lie in [0, 1]");
  }
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("baseline.learning_rate must be positive");
  }
  if (!(l2 >= 0.0)) throw InvalidArgument("baseline.l2 must be >= 0");
}

Ranking GreedyRank(const Vector& theta, std::span<const Vector> docs) {
  std::vector<double> scores;
  scores.reserve(docs.size());
  for (const auto& x : docs) scores.push_back(x.dot(theta));
  Ranking ranking(docs.size());
  std::iota(ranking.begin(), ranking.end(), 0);
  std::stable_sort(ranking.begin(), ranking.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return ranking;
}

Ranking EpsilonGreedyRank(const Vector& theta, std::span<const Vector> docs,
                          double epsilon, Rng& rng) {
  // Remaining documents kept in greedy order so "best unranked" is front().
  Ranking remaining = GreedyRank(theta, docs);
  Ranking ranking;
  ranking.reserve(docs.size());
  while (!remaining.empty()) {
    size_t pick = 0;
    if (remaining.size() > 1 && rng.Bernoulli(epsilon)) {
      pick = rng.UniformInt(remaining.size());
    }
    ranking.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return ranking;
}

Vector SgdRankNetUpdate(const Vector& theta,
                        std::span<const PairwiseObservation> pairs,
                        double learning_rate, double l2) {
  return theta - learning_rate * Gradient(theta, pairs, l2);
}

}  // namespace pairrank
