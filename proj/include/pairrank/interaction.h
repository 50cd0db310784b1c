#ifndef PAIRRANK_INTERACTION_H_
#define PAIRRANK_INTERACTION_H_

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairrank/ranker.h"
#include "pairrank/rng.h"
#include "pairrank/types.h"

namespace pairrank {

// Maps the five LETOR grades 0..4 onto the three click-model grade columns.
struct GradeBinning {
  std::array<int, 5> bins = {0, 0, 1, 1, 2};

  // Throws InvalidArgument for grades outside 0..4.
  int Bin(int grade) const;
  void Validate() const;
};

// Dependent click model parameters per binned grade.
struct ClickModelConfig {
  std::string name;
  std::array<double, 3> click_prob = {0.0, 0.0, 0.0};
  std::array<double, 3> stop_prob = {0.0, 0.0, 0.0};

  static ClickModelConfig Perfect();
  static ClickModelConfig Navigational();
  static ClickModelConfig Informational();
  // Looks up a preset by name (case-insensitive). Throws on unknown names.
  static ClickModelConfig Preset(const std::string& name);

  void Validate() const;
};

struct SessionOutcome {
  std::vector<int> clicks;  // Indexed by presented position.
  int last_examined = 0;    // o_t, 1-based.
};

// Default binning: {0,1} -> 0, {2,3} -> 1, {4} -> 2.
int BinGrade(int grade);

// Top-down examination. A click may be followed by a stop; a skip never
// stops. Positions after the last click count as examined up to the first
// unclicked one.
SessionOutcome SimulateSession(const Ranking& ranking,
                               std::span<const int> grades,
                               const ClickModelConfig& model,
                               const GradeBinning& binning, Rng& rng);

// 0-based (upper, lower) position pairs chosen by the greedy disjoint scan
// over adjacent examined positions with differing clicks.
std::vector<std::pair<int, int>> IndependentPairPositions(
    std::span<const int> clicks, int last_examined);

// Builds the training observations for the independent pairs. diff is
// always (upper doc - lower doc), label is the upper doc's click.
std::vector<PairwiseObservation> ExtractIndependentPairs(
    const Ranking& ranking, const SessionOutcome& outcome,
    std::span<const Vector> docs);

}  // namespace pairrank

#endif  // PAIRRANK_INTERACTION_H_
