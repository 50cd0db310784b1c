#include "pairrank/interaction.h"

#include <algorithm>
#include <cctype>

namespace pairrank {
namespace {

void CheckProbabilities(const std::array<double, 3>& probs,
                        const std::string& what) {
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidArgument(what + " must lie in [0, 1]");
    }
  }
}

}  // namespace

int GradeBinning::Bin(int grade) const {
  if (grade < 0 || grade > 4) {
    throw InvalidArgument("relevance grade " + std::to_string(grade) +
                          " outside 0..4");
  }
  return bins[grade];
}

void GradeBinning::Validate() const {
  for (int b : bins) {
    if (b < 0 || b > 2) throw InvalidArgument("grade bin must be 0, 1 or 2");
  }
}

ClickModelConfig ClickModelConfig::Perfect() {
  return {"perfect", {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}};
}

ClickModelConfig ClickModelConfig::Navigational() {
  return {"navigational", {0.05, 0.5, 0.95}, {0.2, 0.5, 0.9}};
}

ClickModelConfig ClickModelConfig::Informational() {
  return {"informational", {0.4, 0.7, 0.9}, {0.1, 0.3, 0.5}};
}

ClickModelConfig ClickModelConfig::Preset(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "perfect") return Perfect();
  if (lower == "navigational") return Navigational();
  if (lower == "informational") return Informational();
  throw InvalidArgument("unknown click model '" + name + "'");
}

void ClickModelConfig::Validate() const {
  CheckProbabilities(click_prob, "click_prob");
  CheckProbabilities(stop_prob, "stop_prob");
}

int BinGrade(int grade) { return GradeBinning{}.Bin(grade); }

SessionOutcome SimulateSession(const Ranking& ranking,
                               std::span<const int> grades,
                               const ClickModelConfig& model,
                               const GradeBinning& binning, Rng& rng) {
  const int n = static_cast<int>(ranking.size());
  SessionOutcome outcome;
  outcome.clicks.assign(n, 0);
  int last_click = -1;
  for (int p = 0; p < n; ++p) {
    const int bin = binning.Bin(grades[ranking[p]]);
    if (!rng.Bernoulli(model.click_prob[bin])) continue;
    outcome.clicks[p] = 1;
    last_click = p;
    if (rng.Bernoulli(model.stop_prob[bin])) break;
  }
  // Without clicks the user never stops, so the whole list was examined.
  outcome.last_examined = last_click < 0 ? n : std::min(last_click + 2, n);
  return outcome;
}

std::vector<std::pair<int, int>> IndependentPairPositions(
    std::span<const int> clicks, int last_examined) {
  std::vector<std::pair<int, int>> pairs;
  const int limit = std::min<int>(last_examined, clicks.size());
  int p = 0;
  while (p + 1 < limit) {
    if (clicks[p] != clicks[p + 1]) {
      pairs.emplace_back(p, p + 1);
      p += 2;
    } else {
      ++p;
    }
  }
  return pairs;
}

std::vector<PairwiseObservation> ExtractIndependentPairs(
    const Ranking& ranking, const SessionOutcome& outcome,
    std::span<const Vector> docs) {
  std::vector<PairwiseObservation> out;
  for (const auto& [upper, lower] :
       IndependentPairPositions(outcome.clicks, outcome.last_examined)) {
    out.push_back({docs[ranking[upper]] - docs[ranking[lower]],
                   outcome.clicks[upper]});
  }
  return out;
}

}  // namespace pairrank
