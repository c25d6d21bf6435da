#pragma once

#include <cstdint>
#include <vector>

#include "cdrlab/env/reacher.hpp"
#include "cdrlab/nn/policy.hpp"

namespace cdrlab::ppo {

// Fixed-length trajectory store. Columns of obs/actions are steps.
struct RolloutBuffer {
  nn::Matrix obs;          // obs_dim x N, as seen by the agent
  nn::Matrix actions;      // action_dim x N, pre-clamp samples
  nn::Vector logprob_old;  // N
  nn::Vector value_old;    // N
  nn::Vector rewards;      // N
  // Critic value of the successor state; meaningful unless terminal. At a
  // truncation this is the value of the truncated state.
  nn::Vector next_values;  // N
  std::vector<std::uint8_t> terminal;   // termination condition fired
  std::vector<std::uint8_t> truncated;  // horizon reached
  // Filled by compute_advantages().
  nn::Vector advantages;
  nn::Vector returns;

  std::size_t size() const { return static_cast<std::size_t>(rewards.size()); }
  bool episode_end(std::size_t t) const { return terminal[t] != 0 || truncated[t] != 0; }
};

// Steps an environment with the stochastic policy, keeping the in-flight
// episode across calls. Episodes reset automatically with seeds drawn from
// the rng passed to collect().
class RolloutCollector {
 public:
  explicit RolloutCollector(env::Environment& env) : env_(env) {}

  RolloutBuffer collect(const nn::GaussianPolicy& policy, const nn::Critic& critic, int horizon, Rng& rng);

  // Returns of episodes finished since the last call.
  std::vector<double> take_finished_returns();
  long long total_steps() const { return total_steps_; }

 private:
  env::Environment& env_;
  env::Observation obs_{};
  bool need_reset_ = true;
  double episode_return_ = 0.0;
  std::vector<double> finished_;
  long long total_steps_ = 0;
};

// One-shot collection starting from a fresh episode.
RolloutBuffer collect_rollout(env::Environment& env, const nn::GaussianPolicy& policy, const nn::Critic& critic,
                              int horizon, Rng& rng);

nn::Vector to_vector(const env::Observation& obs);
env::Action to_action(const nn::Vector& a);

}  // namespace cdrlab::ppo
