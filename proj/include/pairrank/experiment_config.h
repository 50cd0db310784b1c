#ifndef PAIRRANK_EXPERIMENT_CONFIG_H_
#define PAIRRANK_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairrank/baselines.h"
#include "pairrank/data.h"
#include "pairrank/interaction.h"
#include "pairrank/ranker.h"

namespace pairrank {

// Invalid or unreadable experiment configuration. Reported before any round
// runs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PolicyKind { kPairRankR, kPairRankC, kEpsilonGreedy, kSgdRankNet };

// Where training pairs come from.
//   kClicks: simulated dependent-click sessions.
//   kLogisticPairs: positions (1,2), (3,4), ... labelled by Bernoulli draws
//     from sigma(x_ij . theta_star); synthetic data only.
enum class FeedbackKind { kClicks, kLogisticPairs };

struct DatasetSource {
  std::optional<std::string> train_path;
  std::optional<std::string> test_path;
  std::optional<SyntheticSpec> synthetic;
  bool normalize = true;
};

struct ExperimentConfig {
  PolicyKind policy = PolicyKind::kPairRankC;
  int64_t rounds = 5000;
  std::vector<uint64_t> seeds;
  ClickModelConfig click_model = ClickModelConfig::Perfect();
  GradeBinning binning;
  FeedbackKind feedback = FeedbackKind::kClicks;
  DatasetSource dataset;
  RankerConfig ranker;
  // Ranker dimension comes from the data when the config omits it.
  bool ranker_dim_from_data = true;
  std::optional<BaselineConfig> baseline;
  double gamma = 0.9995;
  std::string output_dir = "out";
  std::optional<int64_t> checkpoint_every;
  int refit_every = 1;
  int eval_every = 50;
  int threads = 1;

  // Checks everything that does not need the data. Throws ConfigError.
  void Validate() const;
};

std::string PolicyName(PolicyKind kind);
PolicyKind ParsePolicyName(const std::string& name);

// Short name used in output file names: the click model name, or
// "logistic" for kLogisticPairs.
std::string FeedbackName(const ExperimentConfig& config);

// The config file is JSON. Unknown keys are rejected so typos surface.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc);
ExperimentConfig LoadExperimentConfig(const std::string& path);
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);

}  // namespace pairrank

#endif  // PAIRRANK_EXPERIMENT_CONFIG_H_
