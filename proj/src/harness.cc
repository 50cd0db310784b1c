#include "pairrank/harness.h"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace pairrank {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kCheckpointVersion = 1;

json VectorToJson(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector VectorFromJson(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

json RankerSnapshot(const Ranker& ranker) {
  json history = json::array();
  for (const auto& obs : ranker.history()) {
    history.push_back({{"diff", VectorToJson(obs.diff)}, {"label", obs.label}});
  }
  return {{"theta", VectorToJson(ranker.theta())},
          {"warm_start", VectorToJson(ranker.warm_start())},
          {"history", std::move(history)},
          {"projection_count", ranker.projection_count()},
          {"nonconverged_fits", ranker.nonconverged_fits()}};
}

Ranker RankerFromSnapshot(const RankerConfig& config, const json& snap) {
  std::vector<PairwiseObservation> history;
  for (const auto& item : snap.at("history")) {
    history.push_back({VectorFromJson(item.at("diff")),
                       item.at("label").get<int>()});
  }
  return Ranker::Restore(config, VectorFromJson(snap.at("theta")),
                         std::move(history),
                         snap.at("projection_count").get<int64_t>(),
                         snap.at("nonconverged_fits").get<int64_t>(),
                         VectorFromJson(snap.at("warm_start")));
}

RankerConfig RankerConfigFor(const ExperimentConfig& config, int dim) {
  RankerConfig rc = config.ranker;
  if (config.ranker_dim_from_data) rc.dim = dim;
  return rc;
}

// Logistic feedback expressed as a click vector: each disjoint position pair
// (2k, 2k+1) gets exactly one click, on the upper position with probability
// sigma(x_upper - x_lower . theta_star).
SessionOutcome LogisticOutcome(const Ranking& ranking,
                               const QueryInstance& query,
                               const Vector& theta_star, Rng& rng) {
  const int n = static_cast<int>(ranking.size());
  SessionOutcome outcome;
  outcome.clicks.assign(n, 0);
  outcome.last_examined = n;
  for (int p = 0; p + 1 < n; p += 2) {
    const Vector diff = query.docs[ranking[p]] - query.docs[ranking[p + 1]];
    const int upper_wins = rng.Bernoulli(Sigmoid(diff.dot(theta_star))) ? 1 : 0;
    outcome.clicks[p] = upper_wins;
    outcome.clicks[p + 1] = 1 - upper_wins;
  }
  return outcome;
}

json BlockDiagnosticsToJson(const BlockDiagnostics& d) {
  json sizes = json::object();
  for (const auto& [rank, size] : d.block_size_at_rank) {
    sizes[std::to_string(rank)] = size;
  }
  return {{"n_blocks", d.n_blocks},
          {"n_uncertain", d.n_uncertain},
          {"sizes", std::move(sizes)}};
}

BlockDiagnostics BlockDiagnosticsFromJson(const json& j) {
  BlockDiagnostics d;
  d.n_blocks = j.at("n_blocks").get<int>();
  d.n_uncertain = j.at("n_uncertain").get<int>();
  for (const auto& item : j.at("sizes").items()) {
    d.block_size_at_rank[std::stoi(item.key())] = item.value().get<int>();
  }
  return d;
}

json RoundMetricsToJson(const RoundMetrics& m) {
  json j = {{"round", m.round},
            {"kendall_regret", m.kendall_regret},
            {"ndcg10", m.ndcg_at_10},
            {"pairs_absorbed", m.pairs_absorbed},
            {"cndcg", m.cndcg},
            {"cum_regret", m.cum_regret}};
  if (m.blocks) j["blocks"] = BlockDiagnosticsToJson(*m.blocks);
  return j;
}

RoundMetrics RoundMetricsFromJson(const json& j) {
  RoundMetrics m;
  m.round = j.at("round").get<int64_t>();
  m.kendall_regret = j.at("kendall_regret").get<int64_t>();
  m.ndcg_at_10 = j.at("ndcg10").get<double>();
  m.pairs_absorbed = j.at("pairs_absorbed").get<int64_t>();
  m.cndcg = j.at("cndcg").get<double>();
  m.cum_regret = j.at("cum_regret").get<int64_t>();
  if (j.contains("blocks")) m.blocks = BlockDiagnosticsFromJson(j.at("blocks"));
  return m;
}

void WriteTextFile(const std::filesystem::path& path,
                   const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

void WriteStream(const std::filesystem::path& path,
                 const std::vector<RoundMetrics>& series) {
  std::string content;
  for (const auto& m : series) {
    content += RoundMetricsToJsonLine(m);
    content += '\n';
  }
  WriteTextFile(path, content);
}

std::pair<double, double> MeanStd(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (values.size() - 1))};
}

}  // namespace

LoadedData LoadData(const ExperimentConfig& config) {
  LoadedData data;
  if (config.dataset.synthetic) {
    SyntheticData synthetic = GenerateSynthetic(*config.dataset.synthetic);
    data.train = std::move(synthetic.train);
    data.test = std::move(synthetic.test);
    data.theta_star = std::move(synthetic.theta_star);
    return data;
  }
  try {
    data.train = ParseLetorFile(*config.dataset.train_path, Split::kTrain);
    if (config.dataset.test_path) {
      data.test = ParseLetorFile(*config.dataset.test_path, Split::kTest);
    }
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
  if (data.train.queries.empty()) {
    throw ConfigError("training split has no queries");
  }
  // Splits may disagree on the largest sparse index; pad to a common width.
  const int dim = std::max(data.train.dim, data.test.dim);
  for (Dataset* ds : {&data.train, &data.test}) {
    for (auto& query : ds->queries) {
      for (auto& x : query.docs) x.conservativeResizeLike(Vector::Zero(dim));
    }
    ds->dim = dim;
  }
  if (config.dataset.normalize) {
    const auto normalizer =
        FeatureNormalizer::Fit(data.train, config.ranker.feature_bound);
    data.train = normalizer.Apply(data.train);
    data.test = normalizer.Apply(data.test);
  }
  for (const auto& query : data.train.queries) {
    for (int g : query.grades) {
      if (g < 0 || g > 4) {
        throw ConfigError("query " + query.query_id + " has grade " +
                          std::to_string(g) + " outside 0..4");
      }
    }
  }
  return data;
}

PairRankPolicy::PairRankPolicy(const RankerConfig& config, ShuffleMode mode,
                               int refit_every)
    : PairRankPolicy(Ranker(config), mode, refit_every) {}

PairRankPolicy::PairRankPolicy(Ranker ranker, ShuffleMode mode,
                               int refit_every)
    : ranker_(std::move(ranker)), mode_(mode), refit_every_(refit_every) {}

PolicyKind PairRankPolicy::kind() const {
  return mode_ == ShuffleMode::kRandomWithinBlock ? PolicyKind::kPairRankR
                                                  : PolicyKind::kPairRankC;
}

RoundPlan PairRankPolicy::Plan(const QueryInstance& query, Rng& shuffle_rng) {
  RoundPlan plan;
  plan.graph = BuildPairGraph(ranker_, query.docs);
  plan.partition = OrderBlocks(ConnectedComponents(*plan.graph), *plan.graph);
  plan.ranking = RenderRankedList(*plan.partition, *plan.graph, mode_,
                                  shuffle_rng);
  return plan;
}

void PairRankPolicy::Learn(std::span<const PairwiseObservation> pairs,
                           int64_t round) {
  ranker_.AbsorbPairs(pairs);
  if (round % refit_every_ == 0) ranker_.Fit();
}

json PairRankPolicy::Snapshot() const {
  return {{"kind", PolicyName(kind())}, {"ranker", RankerSnapshot(ranker_)}};
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(const RankerConfig& config,
                                         double epsilon, int refit_every)
    : EpsilonGreedyPolicy(Ranker(config), epsilon, refit_every) {}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(Ranker ranker, double epsilon,
                                         int refit_every)
    : ranker_(std::move(ranker)), epsilon_(epsilon), refit_every_(refit_every) {}

RoundPlan EpsilonGreedyPolicy::Plan(const QueryInstance& query,
                                    Rng& shuffle_rng) {
  RoundPlan plan;
  plan.ranking =
      EpsilonGreedyRank(ranker_.theta(), query.docs, epsilon_, shuffle_rng);
  return plan;
}

void EpsilonGreedyPolicy::Learn(std::span<const PairwiseObservation> pairs,
                                int64_t round) {
  ranker_.AbsorbPairs(pairs);
  if (round % refit_every_ == 0) ranker_.Fit();
}

json EpsilonGreedyPolicy::Snapshot() const {
  return {{"kind", PolicyName(kind())}, {"ranker", RankerSnapshot(ranker_)}};
}

SgdRankNetPolicy::SgdRankNetPolicy(int dim, double learning_rate, double l2)
    : theta_(Vector::Zero(dim)), learning_rate_(learning_rate), l2_(l2) {}

RoundPlan SgdRankNetPolicy::Plan(const QueryInstance& query, Rng&) {
  RoundPlan plan;
  plan.ranking = GreedyRank(theta_, query.docs);
  return plan;
}

void SgdRankNetPolicy::Learn(std::span<const PairwiseObservation> pairs,
                             int64_t) {
  theta_ = SgdRankNetUpdate(theta_, pairs, learning_rate_, l2_);
}

json SgdRankNetPolicy::Snapshot() const {
  return {{"kind", PolicyName(kind())}, {"theta", VectorToJson(theta_)}};
}

std::unique_ptr<Policy> MakePolicy(const ExperimentConfig& config, int dim) {
  const RankerConfig rc = RankerConfigFor(config, dim);
  switch (config.policy) {
    case PolicyKind::kPairRankR:
      return std::make_unique<PairRankPolicy>(
          rc, ShuffleMode::kRandomWithinBlock, config.refit_every);
    case PolicyKind::kPairRankC:
      return std::make_unique<PairRankPolicy>(
          rc, ShuffleMode::kConservativeWithinBlock, config.refit_every);
    case PolicyKind::kEpsilonGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(
          rc, config.baseline->epsilon, config.refit_every);
    case PolicyKind::kSgdRankNet:
      return std::make_unique<SgdRankNetPolicy>(
          dim, config.baseline->learning_rate, config.baseline->l2);
  }
  throw ConfigError("unhandled policy");
}

std::unique_ptr<Policy> RestorePolicy(const ExperimentConfig& config, int dim,
                                      const json& snapshot) {
  if (snapshot.at("kind").get<std::string>() != PolicyName(config.policy)) {
    throw ConfigError("checkpoint policy does not match its config");
  }
  const RankerConfig rc = RankerConfigFor(config, dim);
  switch (config.policy) {
    case PolicyKind::kPairRankR:
      return std::make_unique<PairRankPolicy>(
          RankerFromSnapshot(rc, snapshot.at("ranker")),
          ShuffleMode::kRandomWithinBlock, config.refit_every);
    case PolicyKind::kPairRankC:
      return std::make_unique<PairRankPolicy>(
          RankerFromSnapshot(rc, snapshot.at("ranker")),
          ShuffleMode::kConservativeWithinBlock, config.refit_every);
    case PolicyKind::kEpsilonGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(
          RankerFromSnapshot(rc, snapshot.at("ranker")),
          config.baseline->epsilon, config.refit_every);
    case PolicyKind::kSgdRankNet: {
      auto policy = std::make_unique<SgdRankNetPolicy>(
          dim, config.baseline->learning_rate, config.baseline->l2);
      policy->set_theta(VectorFromJson(snapshot.at("theta")));
      return policy;
    }
  }
  throw ConfigError("unhandled policy");
}

RoundStreams RoundStreams::ForSeed(uint64_t seed) {
  return {Rng::Substream(seed, "queries"), Rng::Substream(seed, "shuffle"),
          Rng::Substream(seed, "clicks")};
}

InteractionRecord RunRound(Policy& policy, const QueryInstance& query,
                           const FeedbackModel& feedback, RoundStreams& streams,
                           int64_t round, const RoundObserver& observer) {
  InteractionRecord record;
  record.round = round;
  RoundPlan plan = policy.Plan(query, streams.shuffle);
  if (observer) observer({round, query, policy, plan});

  if (feedback.kind == FeedbackKind::kClicks) {
    record.outcome = SimulateSession(plan.ranking, query.grades,
                                     feedback.click_model, feedback.binning,
                                     streams.clicks);
  } else {
    record.outcome = LogisticOutcome(plan.ranking, query, *feedback.theta_star,
                                     streams.clicks);
  }
  record.pairs = ExtractIndependentPairs(plan.ranking, record.outcome,
                                         query.docs);
  policy.Learn(record.pairs, round);

  record.metrics.round = round;
  record.metrics.kendall_regret = KendallRegret(plan.ranking, query.grades);
  record.metrics.ndcg_at_10 = NdcgAtK(plan.ranking, query.grades, 10);
  record.metrics.pairs_absorbed = static_cast<int64_t>(record.pairs.size());
  if (plan.partition) {
    record.metrics.blocks = ComputeBlockDiagnostics(*plan.partition, *plan.graph);
  }
  record.ranking = std::move(plan.ranking);
  return record;
}

Replicate::Replicate(const ExperimentConfig& config, const LoadedData& data,
                     uint64_t seed)
    : config_(config),
      data_(&data),
      seed_(seed),
      policy_(MakePolicy(config, data.train.dim)),
      streams_(RoundStreams::ForSeed(seed)),
      accumulator_(config.gamma) {
  if (data.train.queries.empty()) {
    throw ConfigError("training split has no queries");
  }
  feedback_.kind = config.feedback;
  feedback_.click_model = config.click_model;
  feedback_.binning = config.binning;
  if (config.feedback == FeedbackKind::kLogisticPairs) {
    if (!data.theta_star) {
      throw ConfigError("logistic feedback requires a known theta_star");
    }
    feedback_.theta_star = data.theta_star;
  }
}

InteractionRecord Replicate::Step(const RoundObserver& observer) {
  const int64_t round = rounds_done() + 1;
  const int q = static_cast<int>(
      streams_.queries.UniformInt(data_->train.queries.size()));
  InteractionRecord record = RunRound(*policy_, data_->train.queries[q],
                                      feedback_, streams_, round, observer);
  record.query_index = q;
  accumulator_.Add(record.metrics);
  series_.push_back(record.metrics);
  if (config_.eval_every > 0 && round % config_.eval_every == 0 &&
      !data_->test.queries.empty()) {
    offline_ndcg_.emplace_back(round, OfflineNdcg());
  }
  return record;
}

void Replicate::RunToEnd(const RoundObserver& observer) {
  while (rounds_done() < config_.rounds) {
    Step(observer);
    if (config_.checkpoint_every && !checkpoint_path_.empty() &&
        rounds_done() % *config_.checkpoint_every == 0 &&
        rounds_done() < config_.rounds) {
      WriteTextFile(checkpoint_path_, Checkpoint().dump());
    }
  }
}

double Replicate::OfflineNdcg() const {
  double total = 0.0;
  for (const auto& query : data_->test.queries) {
    total += NdcgAtK(GreedyRank(policy_->theta(), query.docs), query.grades, 10);
  }
  return total / static_cast<double>(data_->test.queries.size());
}

RunSummary Replicate::Summary() const {
  RunSummary summary;
  summary.seed = seed_;
  summary.rounds = rounds_done();
  summary.cumulative_regret = accumulator_.cum_regret();
  summary.cndcg = accumulator_.cndcg();
  if (!data_->test.queries.empty()) summary.final_ndcg = OfflineNdcg();
  if (data_->theta_star) {
    summary.cosine_to_reference =
        CosineSimilarity(policy_->theta(), *data_->theta_star);
  }
  if (const Ranker* ranker = policy_->ranker()) {
    summary.projection_count = ranker->projection_count();
    summary.nonconverged_fits = ranker->nonconverged_fits();
  }
  summary.offline_ndcg = offline_ndcg_;
  summary.series = series_;
  return summary;
}

json Replicate::Checkpoint() const {
  const auto acc = accumulator_.state();
  json series = json::array();
  for (const auto& m : series_) series.push_back(RoundMetricsToJson(m));
  json offline = json::array();
  for (const auto& [round, value] : offline_ndcg_) {
    offline.push_back({round, value});
  }
  return {{"version", kCheckpointVersion},
          {"config", ExperimentConfigToJson(config_)},
          {"seed", seed_},
          {"streams",
           {{"queries", streams_.queries.Serialize()},
            {"shuffle", streams_.shuffle.Serialize()},
            {"clicks", streams_.clicks.Serialize()}}},
          {"accumulator",
           {{"sum", acc.sum},
            {"compensation", acc.compensation},
            {"discount", acc.discount},
            {"cum_regret", acc.cum_regret},
            {"rounds", acc.rounds}}},
          {"series", std::move(series)},
          {"offline_ndcg", std::move(offline)},
          {"policy", policy_->Snapshot()}};
}

Replicate Replicate::FromCheckpoint(const json& checkpoint,
                                    const LoadedData& data) {
  if (checkpoint.at("version").get<int>() != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version");
  }
  const ExperimentConfig config =
      ParseExperimentConfig(checkpoint.at("config"));
  Replicate replicate(config, data, checkpoint.at("seed").get<uint64_t>());
  replicate.policy_ =
      RestorePolicy(config, data.train.dim, checkpoint.at("policy"));
  const json& streams = checkpoint.at("streams");
  replicate.streams_.queries =
      Rng::Deserialize(streams.at("queries").get<std::string>());
  replicate.streams_.shuffle =
      Rng::Deserialize(streams.at("shuffle").get<std::string>());
  replicate.streams_.clicks =
      Rng::Deserialize(streams.at("clicks").get<std::string>());
  const json& acc = checkpoint.at("accumulator");
  replicate.accumulator_.Restore({acc.at("sum").get<double>(),
                                  acc.at("compensation").get<double>(),
                                  acc.at("discount").get<double>(),
                                  acc.at("cum_regret").get<int64_t>(),
                                  acc.at("rounds").get<int64_t>()});
  for (const auto& m : checkpoint.at("series")) {
    replicate.series_.push_back(RoundMetricsFromJson(m));
  }
  for (const auto& item : checkpoint.at("offline_ndcg")) {
    replicate.offline_ndcg_.emplace_back(item.at(0).get<int64_t>(),
                                         item.at(1).get<double>());
  }
  return replicate;
}

std::string RoundMetricsToJsonLine(const RoundMetrics& m) {
  ordered_json j;
  j["round"] = m.round;
  j["kendall_regret"] = m.kendall_regret;
  j["ndcg10"] = m.ndcg_at_10;
  auto size_at = [&](int rank) -> ordered_json {
    if (!m.blocks) return nullptr;
    const auto it = m.blocks->block_size_at_rank.find(rank);
    if (it == m.blocks->block_size_at_rank.end()) return nullptr;
    return it->second;
  };
  j["n_blocks"] = m.blocks ? ordered_json(m.blocks->n_blocks) : nullptr;
  j["block_size_r1"] = size_at(1);
  j["block_size_r5"] = size_at(5);
  j["block_size_r10"] = size_at(10);
  j["n_uncertain"] = m.blocks ? ordered_json(m.blocks->n_uncertain) : nullptr;
  j["pairs_absorbed"] = m.pairs_absorbed;
  j["cndcg"] = m.cndcg;
  j["cum_regret"] = m.cum_regret;
  return j.dump();
}

json RunSummaryToJson(const RunSummary& s) {
  json offline = json::array();
  for (const auto& [round, value] : s.offline_ndcg) {
    offline.push_back({round, value});
  }
  return {{"seed", s.seed},
          {"rounds", s.rounds},
          {"cum_regret", s.cumulative_regret},
          {"cndcg", s.cndcg},
          {"final_ndcg", s.final_ndcg ? json(*s.final_ndcg) : json(nullptr)},
          {"cosine_to_reference", s.cosine_to_reference
                                      ? json(*s.cosine_to_reference)
                                      : json(nullptr)},
          {"projection_count", s.projection_count},
          {"nonconverged_fits", s.nonconverged_fits},
          {"offline_ndcg10", std::move(offline)}};
}

std::string StreamFileName(const ExperimentConfig& config, uint64_t seed) {
  return PolicyName(config.policy) + "_" + FeedbackName(config) + "_seed" +
         std::to_string(seed) + ".jsonl";
}

namespace {

std::string CheckpointFileName(const ExperimentConfig& config, uint64_t seed) {
  std::string name = StreamFileName(config, seed);
  name.replace(name.size() - 6, 6, ".ckpt.json");
  return name;
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const LoadedData data = LoadData(config);
  return RunExperiment(config, data);
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               const LoadedData& data) {
  config.Validate();
  if (!config.ranker_dim_from_data && config.ranker.dim != data.train.dim) {
    throw ConfigError("ranker.dim " + std::to_string(config.ranker.dim) +
                      " differs from data dimension " +
                      std::to_string(data.train.dim));
  }
  const std::filesystem::path out_dir(config.output_dir);
  std::filesystem::create_directories(out_dir);

  const size_t n = config.seeds.size();
  std::vector<RunSummary> summaries(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        const uint64_t seed = config.seeds[i];
        Replicate replicate(config, data, seed);
        if (config.checkpoint_every) {
          replicate.set_checkpoint_path(
              (out_dir / CheckpointFileName(config, seed)).string());
        }
        replicate.RunToEnd();
        summaries[i] = replicate.Summary();
        WriteStream(out_dir / StreamFileName(config, seed), summaries[i].series);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads =
      static_cast<int>(std::min<size_t>(config.threads, n));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  ExperimentResult result;
  std::vector<double> cndcg, regret, final_ndcg;
  json per_seed = json::array();
  for (const auto& s : summaries) {
    cndcg.push_back(s.cndcg);
    regret.push_back(static_cast<double>(s.cumulative_regret));
    if (s.final_ndcg) final_ndcg.push_back(*s.final_ndcg);
    per_seed.push_back(RunSummaryToJson(s));
  }
  const auto [cndcg_mean, cndcg_std] = MeanStd(cndcg);
  const auto [regret_mean, regret_std] = MeanStd(regret);
  json aggregate = {{"policy", PolicyName(config.policy)},
                    {"feedback", FeedbackName(config)},
                    {"rounds", config.rounds},
                    {"gamma", config.gamma},
                    {"cndcg_mean", cndcg_mean},
                    {"cndcg_std", cndcg_std},
                    {"cum_regret_mean", regret_mean},
                    {"cum_regret_std", regret_std},
                    {"replicates", std::move(per_seed)}};
  if (!final_ndcg.empty()) {
    const auto [m, sd] = MeanStd(final_ndcg);
    aggregate["final_ndcg_mean"] = m;
    aggregate["final_ndcg_std"] = sd;
  }
  WriteTextFile(out_dir / "summary.json", aggregate.dump(2) + "\n");
  result.replicates = std::move(summaries);
  result.aggregate = std::move(aggregate);
  return result;
}

RunSummary ResumeFromCheckpoint(const std::string& checkpoint_path) {
  std::ifstream in(checkpoint_path);
  if (!in) throw ConfigError("cannot open checkpoint '" + checkpoint_path + "'");
  json checkpoint;
  try {
    checkpoint = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("checkpoint: " + std::string(e.what()));
  }
  const ExperimentConfig config =
      ParseExperimentConfig(checkpoint.at("config"));
  const LoadedData data = LoadData(config);
  Replicate replicate = Replicate::FromCheckpoint(checkpoint, data);
  const uint64_t seed = checkpoint.at("seed").get<uint64_t>();
  const std::filesystem::path out_dir(config.output_dir);
  replicate.set_checkpoint_path(
      (out_dir / CheckpointFileName(config, seed)).string());
  replicate.RunToEnd();
  RunSummary summary = replicate.Summary();
  WriteStream(out_dir / StreamFileName(config, seed), summary.series);
  std::string summary_name = StreamFileName(config, seed);
  summary_name.replace(summary_name.size() - 6, 6, ".summary.json");
  WriteTextFile(out_dir / summary_name, RunSummaryToJson(summary).dump(2) + "\n");
  return summary;
}

}  // namespace pairrank
