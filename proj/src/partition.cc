#include "pairrank/partition.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace pairrank {

UnionFind::UnionFind(int n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::Find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::Unite(int x, int y) {
  x = Find(x);
  y = Find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  return true;
}

PairGraph BuildPairGraph(const Ranker& ranker, std::span<const Vector> docs) {
  if (docs.empty()) throw InvalidArgument("query has no documents");
  PairGraph graph;
  graph.n_docs = static_cast<int>(docs.size());
  graph.scores.reserve(docs.size());
  for (const auto& x : docs) {
    if (x.size() != ranker.dim()) {
      throw InvalidArgument("document dimension does not match the ranker");
    }
    graph.scores.push_back(x.dot(ranker.theta()));
  }
  const double alpha = ranker.Alpha();
  for (int i = 0; i < graph.n_docs; ++i) {
    for (int j = i + 1; j < graph.n_docs; ++j) {
      switch (ranker.ClassifyPair(docs[i], docs[j], alpha)) {
        case PairClass::kCertainFirst:
          graph.certain_edges.emplace_back(i, j);
          break;
        case PairClass::kCertainSecond:
          graph.certain_edges.emplace_back(j, i);
          break;
        case PairClass::kUncertain:
          graph.uncertain_edges.emplace_back(i, j);
          break;
      }
    }
  }
  return graph;
}

std::vector<std::vector<int>> ConnectedComponents(const PairGraph& graph) {
  UnionFind uf(graph.n_docs);
  for (const auto& [i, j] : graph.uncertain_edges) uf.Unite(i, j);
  std::vector<int> component_of_root(graph.n_docs, -1);
  std::vector<std::vector<int>> components;
  for (int v = 0; v < graph.n_docs; ++v) {
    const int root = uf.Find(v);
    if (component_of_root[root] < 0) {
      component_of_root[root] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[component_of_root[root]].push_back(v);
  }
  return components;
}

Partition OrderBlocks(std::vector<std::vector<int>> components,
                      const PairGraph& graph) {
  std::vector<double> key(components.size());
  std::vector<int> block_of(graph.n_docs, -1);
  for (size_t b = 0; b < components.size(); ++b) {
    if (components[b].empty()) {
      throw InternalConsistencyError("empty component");
    }
    double best = graph.scores[components[b].front()];
    for (int v : components[b]) {
      best = std::max(best, graph.scores[v]);
      if (block_of[v] != -1) {
        throw InternalConsistencyError("document in two components");
      }
      block_of[v] = static_cast<int>(b);
    }
    key[b] = best;
  }
  std::vector<size_t> order(components.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return key[a] > key[b]; });

  std::vector<int> position(components.size());
  Partition partition;
  partition.blocks.reserve(components.size());
  for (size_t rank = 0; rank < order.size(); ++rank) {
    position[order[rank]] = static_cast<int>(rank);
    partition.blocks.push_back(std::move(components[order[rank]]));
  }
  for (const auto& [winner, loser] : graph.certain_edges) {
    const int bw = block_of[winner];
    const int bl = block_of[loser];
    if (bw != bl && position[bw] > position[bl]) {
      throw InternalConsistencyError(
          "certain edge " + std::to_string(winner) + " > " +
          std::to_string(loser) + " points backwards across blocks");
    }
  }
  return partition;
}

namespace {

void ShuffleBlock(std::vector<int>& block, Rng& rng) {
  for (size_t i = block.size() - 1; i > 0; --i) {
    const size_t j = rng.UniformInt(i + 1);
    std::swap(block[i], block[j]);
  }
}

// Randomized Kahn: at each step pick uniformly among the members whose
// in-block certain predecessors are all placed.
std::vector<int> RandomLinearExtension(const std::vector<int>& block,
                                       const PairGraph& graph, Rng& rng) {
  const size_t n = block.size();
  std::vector<int> local(graph.n_docs, -1);
  for (size_t k = 0; k < n; ++k) local[block[k]] = static_cast<int>(k);
  std::vector<std::vector<int>> successors(n);
  std::vector<int> indegree(n, 0);
  for (const auto& [winner, loser] : graph.certain_edges) {
    const int a = local[winner];
    const int b = local[loser];
    if (a < 0 || b < 0) continue;
    successors[a].push_back(b);
    ++indegree[b];
  }
  std::vector<int> available;
  for (size_t k = 0; k < n; ++k) {
    if (indegree[k] == 0) available.push_back(static_cast<int>(k));
  }
  std::vector<int> out;
  out.reserve(n);
  while (!available.empty()) {
    const size_t pick = rng.UniformInt(available.size());
    const int v = available[pick];
    available.erase(available.begin() + static_cast<std::ptrdiff_t>(pick));
    out.push_back(block[v]);
    for (int s : successors[v]) {
      if (--indegree[s] == 0) available.push_back(s);
    }
  }
  if (out.size() != n) {
    throw InternalConsistencyError("certain edges within a block form a cycle");
  }
  return out;
}

}  // namespace

Ranking RenderRankedList(const Partition& partition, const PairGraph& graph,
                         ShuffleMode mode, Rng& rng) {
  Ranking ranking;
  ranking.reserve(graph.n_docs);
  for (const auto& block : partition.blocks) {
    if (block.size() == 1) {
      ranking.push_back(block.front());
      continue;
    }
    if (mode == ShuffleMode::kRandomWithinBlock) {
      std::vector<int> shuffled = block;
      ShuffleBlock(shuffled, rng);
      ranking.insert(ranking.end(), shuffled.begin(), shuffled.end());
    } else {
      const auto ordered = RandomLinearExtension(block, graph, rng);
      ranking.insert(ranking.end(), ordered.begin(), ordered.end());
    }
  }
  return ranking;
}

}  // namespace pairrank
