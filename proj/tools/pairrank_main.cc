// Command-line entry point: run / validate / replay / selfcheck.
//
// Exit codes: 0 success, 1 selfcheck failure, 2 config error,
// 3 runtime abort.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mathcheck.h"
#include "pairrank/harness.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kRuntimeAbort = 3;

pairrank::ExperimentConfig LoadWithOverrides(const std::string& path) {
  auto config = pairrank::LoadExperimentConfig(path);
  if (const char* dir = std::getenv("PAIRRANK_OUTPUT_DIR"); dir && *dir) {
    config.output_dir = dir;
  }
  return config;
}

int Run(const std::string& path) {
  const auto config = LoadWithOverrides(path);
  const auto result = pairrank::RunExperiment(config);
  std::cout << "policy=" << result.aggregate["policy"].get<std::string>()
            << " feedback=" << result.aggregate["feedback"].get<std::string>()
            << " seeds=" << result.replicates.size()
            << " cndcg=" << result.aggregate["cndcg_mean"].get<double>()
            << " +- " << result.aggregate["cndcg_std"].get<double>()
            << " cum_regret=" << result.aggregate["cum_regret_mean"].get<double>()
            << "\nwrote " << config.output_dir << "/summary.json\n";
  return 0;
}

int Validate(const std::string& path) {
  const auto config = LoadWithOverrides(path);
  const auto data = pairrank::LoadData(config);
  if (!config.ranker_dim_from_data && config.ranker.dim != data.train.dim) {
    throw pairrank::ConfigError("ranker.dim differs from the data dimension");
  }
  pairrank::Replicate probe(config, data, config.seeds.front());
  std::cout << "config ok: policy=" << pairrank::PolicyName(config.policy)
            << " feedback=" << pairrank::FeedbackName(config)
            << " rounds=" << config.rounds << " seeds=" << config.seeds.size()
            << " train_queries=" << data.train.queries.size()
            << " test_queries=" << data.test.queries.size()
            << " dim=" << data.train.dim << "\n";
  return 0;
}

int Replay(const std::string& checkpoint) {
  const auto summary = pairrank::ResumeFromCheckpoint(checkpoint);
  std::cout << "resumed seed " << summary.seed << " to round "
            << summary.rounds << " cndcg=" << summary.cndcg
            << " cum_regret=" << summary.cumulative_regret << "\n";
  return 0;
}

int SelfCheck() {
  bool all = true;
  for (const auto& report : pairrank::mathcheck::RunSelfCheck()) {
    std::cout << (report.pass ? "PASS " : "FAIL ") << report.name
              << " max_abs_error=" << report.max_abs_error
              << " tolerance=" << report.tolerance << "\n";
    all = all && report.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online pairwise learning-to-rank simulator"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  auto* validate =
      app.add_subcommand("validate", "Check a config and its data");
  validate->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  std::string checkpoint_path;
  auto* replay =
      app.add_subcommand("replay", "Resume a replicate from a checkpoint");
  replay->add_option("--checkpoint", checkpoint_path, "Checkpoint file")
      ->required();
  auto* selfcheck =
      app.add_subcommand("selfcheck", "Run the brute-force oracle suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return Run(config_path);
    if (*validate) return Validate(config_path);
    if (*replay) return Replay(checkpoint_path);
    if (*selfcheck) return SelfCheck();
  } catch (const pairrank::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const pairrank::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kRuntimeAbort;
  }
  return 0;
}
