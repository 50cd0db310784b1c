#include "pairrank/experiment_config.h"

#include <fstream>
#include <set>

namespace pairrank {
namespace {

using nlohmann::json;

void RejectUnknownKeys(const json& object, const std::set<std::string>& known,
                       const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : object.items()) {
    if (!known.contains(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void ReadIf(const json& object, const char* key, T& out,
            const std::string& where) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::array<double, 3> ReadTriple(const json& object, const char* key,
                                 const std::string& where) {
  std::vector<double> values;
  ReadIf(object, key, values, where);
  if (values.size() != 3) {
    throw ConfigError(where + "." + key + " needs exactly 3 values");
  }
  return {values[0], values[1], values[2]};
}

SyntheticSpec ParseSynthetic(const json& object, double default_u) {
  const std::string where = "dataset.synthetic";
  RejectUnknownKeys(object,
                    {"dim", "n_queries", "n_test_queries", "docs_per_query",
                     "theta_star", "theta_norm", "feature_bound",
                     "grade_levels", "seed"},
                    where);
  SyntheticSpec spec;
  spec.feature_bound = default_u;
  ReadIf(object, "dim", spec.dim, where);
  ReadIf(object, "n_queries", spec.n_queries, where);
  ReadIf(object, "n_test_queries", spec.n_test_queries, where);
  ReadIf(object, "docs_per_query", spec.docs_per_query, where);
  ReadIf(object, "theta_norm", spec.theta_norm, where);
  ReadIf(object, "feature_bound", spec.feature_bound, where);
  ReadIf(object, "grade_levels", spec.grade_levels, where);
  ReadIf(object, "seed", spec.seed, where);
  if (object.contains("theta_star")) {
    std::vector<double> theta;
    ReadIf(object, "theta_star", theta, where);
    spec.theta_star = Eigen::Map<const Vector>(theta.data(),
                                               static_cast<Eigen::Index>(theta.size()));
  }
  return spec;
}

}  // namespace

std::string PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kPairRankR:
      return "pairrank_r";
    case PolicyKind::kPairRankC:
      return "pairrank_c";
    case PolicyKind::kEpsilonGreedy:
      return "epsilon_greedy";
    case PolicyKind::kSgdRankNet:
      return "sgd_ranknet";
  }
  return "unknown";
}

PolicyKind ParsePolicyName(const std::string& name) {
  for (auto kind : {PolicyKind::kPairRankR, PolicyKind::kPairRankC,
                    PolicyKind::kEpsilonGreedy, PolicyKind::kSgdRankNet}) {
    if (PolicyName(kind) == name) return kind;
  }
  throw ConfigError("unknown policy '" + name +
                    "' (expected pairrank_r, pairrank_c, epsilon_greedy or "
                    "sgd_ranknet)");
}

std::string FeedbackName(const ExperimentConfig& config) {
  return config.feedback == FeedbackKind::kLogisticPairs
             ? "logistic"
             : config.click_model.name;
}

void ExperimentConfig::Validate() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ConfigError("gamma must lie in (0, 1]");
  }
  if (refit_every < 1) throw ConfigError("refit_every must be >= 1");
  if (eval_every < 0) throw ConfigError("eval_every must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (checkpoint_every && *checkpoint_every < 1) {
    throw ConfigError("checkpoint_every must be >= 1");
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  const bool has_file = dataset.train_path.has_value();
  if (has_file == dataset.synthetic.has_value()) {
    throw ConfigError("dataset needs exactly one of 'train' or 'synthetic'");
  }
  if (feedback == FeedbackKind::kLogisticPairs && !dataset.synthetic) {
    throw ConfigError("logistic feedback requires a synthetic dataset");
  }
  try {
    click_model.Validate();
    binning.Validate();
    if (dataset.synthetic) dataset.synthetic->Validate();
    RankerConfig probe = ranker;
    if (ranker_dim_from_data) probe.dim = 1;
    probe.Validate();
    if (baseline) baseline->Validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (policy == PolicyKind::kEpsilonGreedy ||
      policy == PolicyKind::kSgdRankNet) {
    if (!baseline) throw ConfigError("baseline section required for policy " +
                                     PolicyName(policy));
  }
}

ExperimentConfig ParseExperimentConfig(const json& doc) {
  RejectUnknownKeys(doc,
                    {"policy", "rounds", "seeds", "click_model", "grade_bins",
                     "feedback", "dataset", "ranker", "baseline", "gamma",
                     "output_dir", "checkpoint_every", "refit_every",
                     "eval_every", "threads"},
                    "config");
  ExperimentConfig config;
  std::string policy = PolicyName(config.policy);
  ReadIf(doc, "policy", policy, "config");
  config.policy = ParsePolicyName(policy);
  ReadIf(doc, "rounds", config.rounds, "config");
  if (doc.contains("seeds")) {
    ReadIf(doc, "seeds", config.seeds, "config");
  } else {
    for (uint64_t s = 1; s <= 20; ++s) config.seeds.push_back(s);
  }

  if (doc.contains("click_model")) {
    const json& cm = doc.at("click_model");
    if (cm.is_string()) {
      try {
        config.click_model = ClickModelConfig::Preset(cm.get<std::string>());
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    } else {
      RejectUnknownKeys(cm, {"name", "click_prob", "stop_prob"},
                        "click_model");
      config.click_model.name = "custom";
      ReadIf(cm, "name", config.click_model.name, "click_model");
      config.click_model.click_prob = ReadTriple(cm, "click_prob", "click_model");
      config.click_model.stop_prob = ReadTriple(cm, "stop_prob", "click_model");
    }
  }
  if (doc.contains("grade_bins")) {
    std::vector<int> bins;
    ReadIf(doc, "grade_bins", bins, "config");
    if (bins.size() != 5) throw ConfigError("grade_bins needs 5 entries");
    std::copy(bins.begin(), bins.end(), config.binning.bins.begin());
  }
  std::string feedback = "clicks";
  ReadIf(doc, "feedback", feedback, "config");
  if (feedback == "clicks") {
    config.feedback = FeedbackKind::kClicks;
  } else if (feedback == "logistic") {
    config.feedback = FeedbackKind::kLogisticPairs;
  } else {
    throw ConfigError("feedback must be 'clicks' or 'logistic'");
  }

  if (doc.contains("ranker")) {
    const json& r = doc.at("ranker");
    RejectUnknownKeys(r,
                      {"dim", "lambda", "delta1", "param_bound",
                       "feature_bound", "noise_param", "fit_tolerance",
                       "fit_max_iters"},
                      "ranker");
    if (r.contains("dim")) {
      ReadIf(r, "dim", config.ranker.dim, "ranker");
      config.ranker_dim_from_data = false;
    }
    ReadIf(r, "lambda", config.ranker.lambda, "ranker");
    ReadIf(r, "delta1", config.ranker.delta1, "ranker");
    ReadIf(r, "param_bound", config.ranker.param_bound, "ranker");
    ReadIf(r, "feature_bound", config.ranker.feature_bound, "ranker");
    ReadIf(r, "noise_param", config.ranker.noise_param, "ranker");
    ReadIf(r, "fit_tolerance", config.ranker.fit_tolerance, "ranker");
    ReadIf(r, "fit_max_iters", config.ranker.fit_max_iters, "ranker");
  }

  if (!doc.contains("dataset")) throw ConfigError("dataset section missing");
  const json& ds = doc.at("dataset");
  RejectUnknownKeys(ds, {"train", "test", "synthetic", "normalize"}, "dataset");
  if (ds.contains("train")) {
    std::string path;
    ReadIf(ds, "train", path, "dataset");
    config.dataset.train_path = path;
  }
  if (ds.contains("test")) {
    std::string path;
    ReadIf(ds, "test", path, "dataset");
    config.dataset.test_path = path;
  }
  ReadIf(ds, "normalize", config.dataset.normalize, "dataset");
  if (ds.contains("synthetic")) {
    config.dataset.synthetic =
        ParseSynthetic(ds.at("synthetic"), config.ranker.feature_bound);
  }

  if (doc.contains("baseline")) {
    const json& b = doc.at("baseline");
    RejectUnknownKeys(b, {"epsilon", "learning_rate", "l2"}, "baseline");
    BaselineConfig baseline;
    ReadIf(b, "epsilon", baseline.epsilon, "baseline");
    ReadIf(b, "learning_rate", baseline.learning_rate, "baseline");
    ReadIf(b, "l2", baseline.l2, "baseline");
    config.baseline = baseline;
  }
  if (config.baseline) {
    config.baseline->kind = config.policy == PolicyKind::kEpsilonGreedy
                                ? BaselineKind::kEpsilonGreedy
                                : BaselineKind::kSgdRankNet;
  }

  ReadIf(doc, "gamma", config.gamma, "config");
  ReadIf(doc, "output_dir", config.output_dir, "config");
  if (doc.contains("checkpoint_every") && !doc.at("checkpoint_every").is_null()) {
    int64_t every = 0;
    ReadIf(doc, "checkpoint_every", every, "config");
    config.checkpoint_every = every;
  }
  ReadIf(doc, "refit_every", config.refit_every, "config");
  ReadIf(doc, "eval_every", config.eval_every, "config");
  ReadIf(doc, "threads", config.threads, "config");
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return ParseExperimentConfig(doc);
}

json ExperimentConfigToJson(const ExperimentConfig& config) {
  json doc;
  doc["policy"] = PolicyName(config.policy);
  doc["rounds"] = config.rounds;
  doc["seeds"] = config.seeds;
  doc["click_model"] = {{"name", config.click_model.name},
                        {"click_prob", config.click_model.click_prob},
                        {"stop_prob", config.click_model.stop_prob}};
  doc["grade_bins"] = config.binning.bins;
  doc["feedback"] =
      config.feedback == FeedbackKind::kClicks ? "clicks" : "logistic";
  json ranker = {{"lambda", config.ranker.lambda},
                 {"delta1", config.ranker.delta1},
                 {"param_bound", config.ranker.param_bound},
                 {"feature_bound", config.ranker.feature_bound},
                 {"noise_param", config.ranker.noise_param},
                 {"fit_tolerance", config.ranker.fit_tolerance},
                 {"fit_max_iters", config.ranker.fit_max_iters}};
  if (!config.ranker_dim_from_data) ranker["dim"] = config.ranker.dim;
  doc["ranker"] = ranker;
  json ds;
  if (config.dataset.train_path) ds["train"] = *config.dataset.train_path;
  if (config.dataset.test_path) ds["test"] = *config.dataset.test_path;
  ds["normalize"] = config.dataset.normalize;
  if (config.dataset.synthetic) {
    const auto& s = *config.dataset.synthetic;
    json syn = {{"dim", s.dim},
                {"n_queries", s.n_queries},
                {"n_test_queries", s.n_test_queries},
                {"docs_per_query", s.docs_per_query},
                {"theta_norm", s.theta_norm},
                {"feature_bound", s.feature_bound},
                {"grade_levels", s.grade_levels},
                {"seed", s.seed}};
    if (s.theta_star) {
      syn["theta_star"] =
          std::vector<double>(s.theta_star->data(),
                              s.theta_star->data() + s.theta_star->size());
    }
    ds["synthetic"] = syn;
  }
  doc["dataset"] = ds;
  if (config.baseline) {
    doc["baseline"] = {{"epsilon", config.baseline->epsilon},
                       {"learning_rate", config.baseline->learning_rate},
                       {"l2", config.baseline->l2}};
  }
  doc["gamma"] = config.gamma;
  doc["output_dir"] = config.output_dir;
  if (config.checkpoint_every) doc["checkpoint_every"] = *config.checkpoint_every;
  doc["refit_every"] = config.refit_every;
  doc["eval_every"] = config.eval_every;
  doc["threads"] = config.threads;
  return doc;
}

}  // namespace pairrank
