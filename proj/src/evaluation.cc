#include "pairrank/evaluation.h"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pairrank {

int64_t KendallRegret(const Ranking& ranking, std::span<const int> grades) {
  if (ranking.size() != grades.size()) {
    throw InvalidArgument("ranking and grades differ in length");
  }
  int64_t regret = 0;
  for (size_t a = 0; a < ranking.size(); ++a) {
    for (size_t b = a + 1; b < ranking.size(); ++b) {
      if (grades[ranking[a]] < grades[ranking[b]]) ++regret;
    }
  }
  return regret;
}

double NdcgAtK(const Ranking& ranking, std::span<const int> grades, int k) {
  if (k < 1) throw InvalidArgument("NDCG cutoff must be >= 1");
  if (ranking.size() != grades.size()) {
    throw InvalidArgument("ranking and grades differ in length");
  }
  const size_t depth = std::min<size_t>(k, ranking.size());
  auto gain = [](int grade) { return std::exp2(grade) - 1.0; };
  double dcg = 0.0;
  for (size_t p = 0; p < depth; ++p) {
    dcg += gain(grades[ranking[p]]) / std::log2(p + 2.0);
  }
  std::vector<int> ideal(grades.begin(), grades.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (size_t p = 0; p < depth; ++p) idcg += gain(ideal[p]) / std::log2(p + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

double CumulativeNdcg(std::span<const double> series, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("gamma must lie in (0, 1]");
  }
  MetricAccumulator acc(gamma);
  for (double v : series) {
    RoundMetrics m;
    m.ndcg_at_10 = v;
    acc.Add(m);
  }
  return acc.cndcg();
}

double CosineSimilarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

BlockDiagnostics ComputeBlockDiagnostics(const Partition& partition,
                                         const PairGraph& graph,
                                         std::span<const int> tracked_ranks) {
  BlockDiagnostics diag;
  diag.n_blocks = static_cast<int>(partition.blocks.size());
  diag.n_uncertain = static_cast<int>(graph.uncertain_edges.size());
  // Blocks occupy contiguous rank ranges in the rendered list.
  std::vector<int> size_at_position;
  for (const auto& block : partition.blocks) {
    size_at_position.insert(size_at_position.end(), block.size(),
                            static_cast<int>(block.size()));
  }
  for (int rank : tracked_ranks) {
    if (rank >= 1 && rank <= static_cast<int>(size_at_position.size())) {
      diag.block_size_at_rank[rank] = size_at_position[rank - 1];
    }
  }
  return diag;
}

void MetricAccumulator::Add(RoundMetrics& metrics) {
  const double term = metrics.ndcg_at_10 * discount_ - compensation_;
  const double next = sum_ + term;
  compensation_ = (next - sum_) - term;
  sum_ = next;
  discount_ *= gamma_;
  cum_regret_ += metrics.kendall_regret;
  ++rounds_;
  metrics.cndcg = sum_;
  metrics.cum_regret = cum_regret_;
}

void MetricAccumulator::Restore(const State& s) {
  sum_ = s.sum;
  compensation_ = s.compensation;
  discount_ = s.discount;
  cum_regret_ = s.cum_regret;
  rounds_ = s.rounds;
}

}  // namespace pairrank
