#ifndef PAIRRANK_EVALUATION_H_
#define PAIRRANK_EVALUATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pairrank/partition.h"
#include "pairrank/types.h"

namespace pairrank {

inline constexpr double kDefaultGamma = 0.9995;
inline constexpr int kDefaultTrackedRanksArray[] = {1, 5, 10};
inline constexpr std::span<const int> kDefaultTrackedRanks =
    kDefaultTrackedRanksArray;

// Number of document pairs shown in the opposite order of their grades.
// Equal-grade pairs never count.
int64_t KendallRegret(const Ranking& ranking, std::span<const int> grades);

// Gain 2^g - 1, discount log2(p + 1). Returns 0 when the ideal DCG is 0.
double NdcgAtK(const Ranking& ranking, std::span<const int> grades, int k);

// sum_t series[t] * gamma^t (t from 0), Kahan-summed.
double CumulativeNdcg(std::span<const double> series, double gamma);

// 0 when either vector is zero.
double CosineSimilarity(const Vector& a, const Vector& b);

struct BlockDiagnostics {
  int n_blocks = 0;
  // 1-based rank -> size of the block holding that rank. Ranks past the end
  // of the list are absent.
  std::map<int, int> block_size_at_rank;
  int n_uncertain = 0;
};

BlockDiagnostics ComputeBlockDiagnostics(
    const Partition& partition, const PairGraph& graph,
    std::span<const int> tracked_ranks = kDefaultTrackedRanks);


struct RoundMetrics {
  int64_t round = 0;
  int64_t kendall_regret = 0;
  double ndcg_at_10 = 0.0;
  // Present only for partition-based policies.
  std::optional<BlockDiagnostics> blocks;
  int64_t pairs_absorbed = 0;
  // Running totals through this round.
  double cndcg = 0.0;
  int64_t cum_regret = 0;
};

// Incrementally accumulates the discounted NDCG sum and regret total.
class MetricAccumulator {
 public:
  explicit MetricAccumulator(double gamma = kDefaultGamma) : gamma_(gamma) {}

  void Add(RoundMetrics& metrics);

  double cndcg() const { return sum_; }
  int64_t cum_regret() const { return cum_regret_; }
  int64_t rounds() const { return rounds_; }

  // Checkpoint support.
  struct State {
    double sum = 0.0;
    double compensation = 0.0;
    double discount = 1.0;
    int64_t cum_regret = 0;
    int64_t rounds = 0;
  };
  State state() const {
    return {sum_, compensation_, discount_, cum_regret_, rounds_};
  }
  void Restore(const State& s);

 private:
  double gamma_;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  double discount_ = 1.0;
  int64_t cum_regret_ = 0;
  int64_t rounds_ = 0;
};

}  // namespace pairrank

#endif  // PAIRRANK_EVALUATION_H_
