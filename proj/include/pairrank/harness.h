#ifndef PAIRRANK_HARNESS_H_
#define PAIRRANK_HARNESS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairrank/baselines.h"
#include "pairrank/data.h"
#include "pairrank/evaluation.h"
#include "pairrank/experiment_config.h"
#include "pairrank/interaction.h"
#include "pairrank/partition.h"
#include "pairrank/ranker.h"
#include "pairrank/rng.h"

namespace pairrank {

// Train/test queries after loading and normalization. theta_star is only
// known for synthetic data and is never handed to a policy.
struct LoadedData {
  Dataset train;
  Dataset test;
  std::optional<Vector> theta_star;
};

// Reads or generates the data a config names. Throws ConfigError when a
// file cannot be read or parsed.
LoadedData LoadData(const ExperimentConfig& config);

// Ranking chosen for one query, with the pair graph and blocks when the
// policy builds them.
struct RoundPlan {
  Ranking ranking;
  std::optional<PairGraph> graph;
  std::optional<Partition> partition;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyKind kind() const = 0;
  virtual RoundPlan Plan(const QueryInstance& query, Rng& shuffle_rng) = 0;
  // Consumes round `round`'s pairs (1-based round index).
  virtual void Learn(std::span<const PairwiseObservation> pairs,
                     int64_t round) = 0;
  virtual const Vector& theta() const = 0;
  // Underlying MLE ranker, when the policy has one.
  virtual const Ranker* ranker() const { return nullptr; }
  virtual nlohmann::json Snapshot() const = 0;
};

// Confidence-bounded pairwise ranker with block shuffling.
class PairRankPolicy : public Policy {
 public:
  PairRankPolicy(const RankerConfig& config, ShuffleMode mode,
                 int refit_every = 1);
  PairRankPolicy(Ranker ranker, ShuffleMode mode, int refit_every);

  PolicyKind kind() const override;
  RoundPlan Plan(const QueryInstance& query, Rng& shuffle_rng) override;
  void Learn(std::span<const PairwiseObservation> pairs,
             int64_t round) override;
  const Vector& theta() const override { return ranker_.theta(); }
  const Ranker* ranker() const override { return &ranker_; }
  nlohmann::json Snapshot() const override;

 private:
  Ranker ranker_;
  ShuffleMode mode_;
  int refit_every_;
};

// RankNet MLE (same estimator as PairRank) ranked epsilon-greedily.
class EpsilonGreedyPolicy : public Policy {
 public:
  EpsilonGreedyPolicy(const RankerConfig& config, double epsilon,
                      int refit_every = 1);
  EpsilonGreedyPolicy(Ranker ranker, double epsilon, int refit_every);

  PolicyKind kind() const override { return PolicyKind::kEpsilonGreedy; }
  RoundPlan Plan(const QueryInstance& query, Rng& shuffle_rng) override;
  void Learn(std::span<const PairwiseObservation> pairs,
             int64_t round) override;
  const Vector& theta() const override { return ranker_.theta(); }
  const Ranker* ranker() const override { return &ranker_; }
  nlohmann::json Snapshot() const override;

 private:
  Ranker ranker_;
  double epsilon_;
  int refit_every_;
};

// One SGD step per round on that round's pairs; greedy ranking.
class SgdRankNetPolicy : public Policy {
 public:
  SgdRankNetPolicy(int dim, double learning_rate, double l2);

  PolicyKind kind() const override { return PolicyKind::kSgdRankNet; }
  RoundPlan Plan(const QueryInstance& query, Rng& shuffle_rng) override;
  void Learn(std::span<const PairwiseObservation> pairs,
             int64_t round) override;
  const Vector& theta() const override { return theta_; }
  nlohmann::json Snapshot() const override;
  void set_theta(const Vector& theta) { theta_ = theta; }

 private:
  Vector theta_;
  double learning_rate_;
  double l2_;
};

// Builds a fresh policy for the config. `dim` is the data dimension.
std::unique_ptr<Policy> MakePolicy(const ExperimentConfig& config, int dim);
// Rebuilds a policy from Snapshot() output.
std::unique_ptr<Policy> RestorePolicy(const ExperimentConfig& config, int dim,
                                      const nlohmann::json& snapshot);

// How a presented list turns into training pairs.
struct FeedbackModel {
  FeedbackKind kind = FeedbackKind::kClicks;
  ClickModelConfig click_model = ClickModelConfig::Perfect();
  GradeBinning binning;
  std::optional<Vector> theta_star;  // kLogisticPairs only.
};

// Per-replicate random substreams.
struct RoundStreams {
  Rng queries;
  Rng shuffle;
  Rng clicks;

  static RoundStreams ForSeed(uint64_t seed);
};

struct InteractionRecord {
  int64_t round = 0;
  int query_index = 0;
  Ranking ranking;
  SessionOutcome outcome;
  std::vector<PairwiseObservation> pairs;
  RoundMetrics metrics;
};

// What an observer sees each round: the plan and the policy state before
// the round's feedback is learned.
struct RoundObservation {
  int64_t round;
  const QueryInstance& query;
  const Policy& policy;
  const RoundPlan& plan;
};
using RoundObserver = std::function<void(const RoundObservation&)>;

// One round of the interaction loop on a given query: plan (using the
// model fitted through the previous round), simulate feedback, extract
// independent pairs, then learn. Metrics carry no running totals.
InteractionRecord RunRound(Policy& policy, const QueryInstance& query,
                           const FeedbackModel& feedback, RoundStreams& streams,
                           int64_t round, const RoundObserver& observer = {});

struct RunSummary {
  uint64_t seed = 0;
  int64_t rounds = 0;
  int64_t cumulative_regret = 0;
  double cndcg = 0.0;
  std::optional<double> final_ndcg;
  std::optional<double> cosine_to_reference;
  int64_t projection_count = 0;
  int64_t nonconverged_fits = 0;
  std::vector<std::pair<int64_t, double>> offline_ndcg;
  std::vector<RoundMetrics> series;
};

// One seeded replicate. Owns its policy, streams and metrics; `data` must
// outlive it.
class Replicate {
 public:
  Replicate(const ExperimentConfig& config, const LoadedData& data,
            uint64_t seed);

  // Runs until `rounds_done() == config.rounds`. Writes checkpoints when
  // configured and a checkpoint path is set.
  void RunToEnd(const RoundObserver& observer = {});
  InteractionRecord Step(const RoundObserver& observer = {});

  int64_t rounds_done() const { return accumulator_.rounds(); }
  const Policy& policy() const { return *policy_; }
  RunSummary Summary() const;

  nlohmann::json Checkpoint() const;
  static Replicate FromCheckpoint(const nlohmann::json& checkpoint,
                                  const LoadedData& data);
  void set_checkpoint_path(std::string path) {
    checkpoint_path_ = std::move(path);
  }

 private:
  double OfflineNdcg() const;

  ExperimentConfig config_;
  const LoadedData* data_;
  uint64_t seed_;
  std::unique_ptr<Policy> policy_;
  FeedbackModel feedback_;
  RoundStreams streams_;
  MetricAccumulator accumulator_;
  std::vector<RoundMetrics> series_;
  std::vector<std::pair<int64_t, double>> offline_ndcg_;
  std::string checkpoint_path_;
};

// One JSON-lines record for a round, fields in fixed order.
std::string RoundMetricsToJsonLine(const RoundMetrics& metrics);
nlohmann::json RunSummaryToJson(const RunSummary& summary);

std::string StreamFileName(const ExperimentConfig& config, uint64_t seed);

struct ExperimentResult {
  std::vector<RunSummary> replicates;
  nlohmann::json aggregate;
};

// Runs every seed (in parallel up to config.threads), writing
// <output_dir>/<policy>_<feedback>_seed<k>.jsonl and summary.json.
ExperimentResult RunExperiment(const ExperimentConfig& config);
// Same, on already-loaded data.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const LoadedData& data);

// Continues a replicate from a checkpoint file to the configured number of
// rounds, rewriting its JSONL stream. Returns the finished summary.
RunSummary ResumeFromCheckpoint(const std::string& checkpoint_path);

}  // namespace pairrank

#endif  // PAIRRANK_HARNESS_H_
