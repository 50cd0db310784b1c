#ifndef PAIRRANK_PARTITION_H_
#define PAIRRANK_PARTITION_H_

#include <span>
#include <utility>
#include <vector>

#include "pairrank/ranker.h"
#include "pairrank/rng.h"
#include "pairrank/types.h"

namespace pairrank {

// Certain/uncertain classification of every document pair for one query.
struct PairGraph {
  int n_docs = 0;
  // Unordered pairs (i, j) with i < j.
  std::vector<std::pair<int, int>> uncertain_edges;
  // Ordered pairs (winner, loser): winner is certainly preferred.
  std::vector<std::pair<int, int>> certain_edges;
  // x_k . theta_hat per document.
  std::vector<double> scores;
};

// Ordered blocks of document indices. Members of each block are kept in
// ascending index order.
struct Partition {
  std::vector<std::vector<int>> blocks;
};

enum class ShuffleMode { kRandomWithinBlock, kConservativeWithinBlock };

// Disjoint-set forest with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int Find(int x);
  // Returns false if x and y were already connected.
  bool Unite(int x, int y);
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

// Classifies all L(L-1)/2 pairs with one alpha computed for the round.
PairGraph BuildPairGraph(const Ranker& ranker, std::span<const Vector> docs);

// Connected components of the uncertain-edge graph, each sorted ascending,
// listed in order of their smallest member.
std::vector<std::vector<int>> ConnectedComponents(const PairGraph& graph);

// Orders components so every cross-block certain edge points forward.
// Throws InternalConsistencyError if the certain edges disagree.
Partition OrderBlocks(std::vector<std::vector<int>> components,
                      const PairGraph& graph);

// Concatenates per-block orderings. Singleton blocks consume no randomness.
Ranking RenderRankedList(const Partition& partition, const PairGraph& graph,
                         ShuffleMode mode, Rng& rng);

}  // namespace pairrank

#endif  // PAIRRANK_PARTITION_H_
