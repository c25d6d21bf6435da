#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "cdrlab/env/reacher.hpp"
#include "cdrlab/nn/policy.hpp"
#include "cdrlab/ppo/ppo.hpp"

namespace cdrlab::continual {

struct FisherConfig {
  int buffer_episodes = 100;  // episode cap of the replay buffer
  int replay_samples = 5000;  // target (obs, action) pair count
  int replay_batch = 32;      // accumulation batch size
};

// (obs, action) pairs replayed for the empirical Fisher.
struct FisherReplayBuffer {
  nn::Matrix obs;      // obs_dim x n
  nn::Matrix actions;  // action_dim x n, pre-clamp samples
  int episodes = 0;

  std::size_t size() const { return static_cast<std::size_t>(obs.cols()); }
  bool empty() const { return size() == 0; }
};

// Rolls out the stochastic policy until `target_count` pairs are stored or the
// episode cap is reached, whichever comes first.
FisherReplayBuffer collect_fisher_samples(env::Environment& env, const nn::GaussianPolicy& policy,
                                          int target_count, int max_episodes, Rng& rng);

// diag F = (1/n) sum_i (d log pi(a_i | s_i) / d theta)^2, accumulated in batches.
nn::Vector compute_fisher_diag(const nn::GaussianPolicy& policy, const FisherReplayBuffer& buffer,
                               int batch_size);

// F / max(F) when max(F) > 0, otherwise F unchanged.
nn::Vector normalize_fisher(const nn::Vector& fisher);

struct EwcAnchor {
  nn::Vector theta_star;
  nn::Vector fisher;  // normalized to [0, 1]
  double lambda = 5e3;
};

// One anchor per consolidated task; memory grows linearly with tasks.
struct EwcState {
  std::vector<EwcAnchor> anchors;
};

// Single anchor with a decayed running Fisher; constant memory.
struct OnlineEwcState {
  nn::Vector theta_star;
  nn::Vector f_star;
  double gamma = 0.95;
  double lambda = 5e3;
  bool gamma_in_penalty = true;
  int consolidations = 0;
};

struct Penalty {
  double value = 0.0;
  nn::Vector gradient;
};

// sum_k lambda_k / 2 * sum_j F_k[j] (theta[j] - theta*_k[j])^2
Penalty ewc_penalty(const nn::Vector& theta, const EwcState& state);
// lambda / 2 * sum_j w * f*[j] (theta[j] - theta*[j])^2 with w = gamma when
// gamma_in_penalty, else 1. Zero before the first consolidation.
Penalty online_penalty(const nn::Vector& theta, const OnlineEwcState& state);

// Appends an anchor on the current actor parameters.
void consolidate_offline(EwcState& state, const nn::GaussianPolicy& policy, const nn::Vector& fisher_normalized,
                         double lambda);
// f* <- gamma f* + F_i; theta* <- current actor parameters.
void consolidate_online(OnlineEwcState& state, const nn::GaussianPolicy& policy, const nn::Vector& fisher_normalized);

// Either continual state, or none (plain finetuning).
using ContinualState = std::variant<std::monostate, EwcState, OnlineEwcState>;

std::size_t anchor_count(const ContinualState& state);

// Adapter exposing a continual state as a PPO actor regularizer.
class ContinualRegularizer final : public ppo::ActorRegularizer {
 public:
  explicit ContinualRegularizer(const ContinualState& state) : state_(state) {}
  double penalty(const nn::Vector& theta, Eigen::Ref<nn::Vector> grad) const override;

 private:
  const ContinualState& state_;
};

}  // namespace cdrlab::continual
