#ifndef PAIRRANK_BASELINES_H_
#define PAIRRANK_BASELINES_H_

#include <span>

#include "pairrank/ranker.h"
#include "pairrank/rng.h"
#include "pairrank/types.h"

namespace pairrank {

enum class BaselineKind { kEpsilonGreedy, kSgdRankNet };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::kSgdRankNet;
  double epsilon = 0.1;        // EpsilonGreedy only.
  double learning_rate = 0.1;  // SgdRankNet only.
  double l2 = 0.0;             // SgdRankNet only.

  void Validate() const;
};

// Fills the list position by position: with probability epsilon a uniformly
// chosen unranked document, otherwise the best-scoring unranked one (lowest
// index on ties).
Ranking EpsilonGreedyRank(const Vector& theta, std::span<const Vector> docs,
                          double epsilon, Rng& rng);

// Pure exploitation: documents by descending x . theta, ties by index.
Ranking GreedyRank(const Vector& theta, std::span<const Vector> docs);

// One step theta <- theta - lr * grad, where grad is the RankNet gradient on
// this round's pairs plus l2 * theta.
Vector SgdRankNetUpdate(const Vector& theta,
                        std::span<const PairwiseObservation> pairs,
                        double learning_rate, double l2);

}  // namespace pairrank

#endif  // PAIRRANK_BASELINES_H_
