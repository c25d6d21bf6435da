#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cdrlab/env/reacher.hpp"
#include "cdrlab/nn/policy.hpp"

namespace cdrlab::eval {

enum class EvalEnv { Ideal, ProxyReal };

const char* to_string(EvalEnv e);
EvalEnv parse_eval_env(const std::string& s);

struct EvalRecord {
  std::string run_id;
  std::string strategy;
  std::string ordering;
  std::uint64_t seed = 0;
  int phase = 0;
  long long timestep = 0;
  EvalEnv eval_env = EvalEnv::Ideal;
  int episode = 0;
  double r_ep = 0.0;
  double continuity = 0.0;  // in [0, 100]
  double d_tgt = 0.0;       // meters (squared meters when d_tgt_squared)
};

double episodic_reward(std::span<const double> rewards);

// 100 * mean_t(|a_{t+1} - a_t|^2) / max_t |a_{t+1} - a_t|^2 with the Euclidean
// norm; 0 when all consecutive actions are equal. Needs at least two actions.
double continuity_cost(std::span<const env::Action> actions);

// Mean end-effector distance to the target over steps T/2..T inclusive.
// positions[t] is the end-effector after t steps (positions[0] at reset).
// With `squared`, the squared distance is averaged instead.
double distance_to_target(std::span<const env::Vec3> positions, const env::Vec3& target, int horizon,
                          bool squared = false);

// Everything recorded for one deterministic evaluation episode.
struct EpisodeTrace {
  std::vector<double> rewards;
  std::vector<env::Action> actions;     // clamped, as executed
  std::vector<env::Vec3> positions;     // horizon + 1 entries; held after termination
  env::Vec3 target{};
  bool terminated = false;
};

EpisodeTrace run_episode(const nn::GaussianPolicy& policy, env::Environment& env, std::uint64_t seed);

struct EpisodeMetrics {
  double r_ep = 0.0;
  double continuity = 0.0;
  double d_tgt = 0.0;
};

EpisodeMetrics episode_metrics(const EpisodeTrace& trace, int horizon, bool d_tgt_squared = false);

// Identifies the records produced by evaluate().
struct RecordKey {
  std::string run_id;
  std::string strategy;
  std::string ordering;
  std::uint64_t seed = 0;
  int phase = 0;
  long long timestep = 0;
  EvalEnv eval_env = EvalEnv::Ideal;
};

// Deterministic (policy-mean) rollouts, one record per episode seed.
std::vector<EvalRecord> evaluate(const nn::GaussianPolicy& policy, env::Environment& env,
                                 std::span<const std::uint64_t> episode_seeds, const RecordKey& key,
                                 bool d_tgt_squared = false);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population
  double median = 0.0;
};

struct SummaryRow {
  std::string strategy;
  std::string ordering;
  EvalEnv eval_env = EvalEnv::Ideal;
  std::size_t count = 0;
  MetricSummary r_ep;
  MetricSummary continuity;
  MetricSummary d_tgt;
};

MetricSummary summarize(std::span<const double> values);

// Groups by (strategy, ordering, eval_env), sorted by that key.
std::vector<SummaryRow> aggregate(std::span<const EvalRecord> records);

}  // namespace cdrlab::eval
