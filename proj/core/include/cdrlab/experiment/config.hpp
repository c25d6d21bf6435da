#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdrlab/strategy/schedule.hpp"
#include "cdrlab/strategy/trainer.hpp"

namespace cdrlab::experiment {

// {1, 5} x 10^{0..4}, ascending.
std::vector<double> default_lambda_grid();

struct MatrixConfig {
  std::vector<strategy::StrategyKind> strategies{strategy::StrategyKind::Ideal, strategy::StrategyKind::Randomized,
                                                 strategy::StrategyKind::Finetuning, strategy::StrategyKind::CdrEwc,
                                                 strategy::StrategyKind::CdrOnlineEwc};
  std::vector<std::string> orderings{"TLN", "NLT"};
  int seeds = 5;
  std::uint64_t seed_base = 1;
  long long total_budget = 400'000;
  long long pretrain_budget = 100'000;
  std::vector<double> lambda_grid = default_lambda_grid();

  std::vector<std::uint64_t> seed_list() const;
};

struct OutputConfig {
  std::string dir = "runs";
  double eval_every_fraction = 0.02;
  int eval_episodes = 10;
};

struct ExperimentConfig {
  strategy::EnvSettings env;
  strategy::RandomizationRanges ranges;
  ppo::PpoConfig ppo;
  std::vector<int> hidden{64, 64};
  strategy::ContinualSettings continual;
  bool d_tgt_squared = false;
  MatrixConfig matrix;
  OutputConfig output;

  strategy::TrainerSettings trainer() const;
};

// Parses a JSON config; absent fields keep their defaults. `overrides` are
// "dotted.key=value" strings applied before validation. Throws ConfigError
// listing every offending field.
ExperimentConfig parse_config(std::string_view json_text, std::span<const std::string> overrides = {});
ExperimentConfig load_config(const std::string& path, std::span<const std::string> overrides = {});

// Semantic validation; throws ConfigError with one line per problem.
void validate(const ExperimentConfig& cfg);

// Canonical JSON rendering (sorted keys, every field present).
std::string dump_config(const ExperimentConfig& cfg);
// FNV-1a of dump_config; identifies a configuration.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hash_hex(std::uint64_t h);

}  // namespace cdrlab::experiment
