#pragma once

#include "cdrlab/nn/adam.hpp"
#include "cdrlab/nn/policy.hpp"
#include "cdrlab/ppo/rollout.hpp"

namespace cdrlab::ppo {

struct PpoConfig {
  double gae_lambda = 0.95;
  double gamma = 0.99;
  double learning_rate = 2.5e-4;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double clip_range = 0.1;
  int epochs = 10;
  int minibatches = 32;
  int rollout_horizon = 2048;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-5;

  void validate() const;
  nn::AdamConfig adam() const { return {learning_rate, adam_beta1, adam_beta2, adam_epsilon}; }
};

// Additive penalty on the flat actor parameters (continual-learning hook).
class ActorRegularizer {
 public:
  virtual ~ActorRegularizer() = default;
  // Returns the penalty value and adds its gradient to `grad`.
  virtual double penalty(const nn::Vector& theta, Eigen::Ref<nn::Vector> grad) const = 0;
};

struct UpdateStats {
  double actor_loss = 0.0;   // clipped surrogate loss, excluding penalty and entropy
  double critic_loss = 0.0;  // value_coef * mse
  double penalty = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  int gradient_steps = 0;
};

struct PpoOptimizers {
  nn::Adam actor;
  nn::Adam critic;

  PpoOptimizers() = default;
  PpoOptimizers(const nn::GaussianPolicy& policy, const nn::Critic& critic, const PpoConfig& config);
};

// Loss terms and gradients of one minibatch; exposed for testing.
struct MinibatchLoss {
  double surrogate = 0.0;
  double entropy = 0.0;
  double penalty = 0.0;
  double critic = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  nn::Vector actor_grad;
  nn::Vector critic_grad;
};

// advantages are used as given (normalize beforehand if desired).
MinibatchLoss minibatch_loss(const nn::GaussianPolicy& policy, const nn::Critic& critic, const nn::Matrix& obs,
                             const nn::Matrix& actions, const nn::Vector& logprob_old, const nn::Vector& advantages,
                             const nn::Vector& returns, const PpoConfig& config, const ActorRegularizer* regularizer);

// (a - mean) / (sample std + 1e-8); unchanged when fewer than two entries.
nn::Vector normalize_advantages(const nn::Vector& adv);

// Clipped-surrogate update over `epochs` shuffled passes split into `minibatches`.
// The buffer must already hold advantages and returns.
UpdateStats ppo_update(nn::GaussianPolicy& policy, nn::Critic& critic, const RolloutBuffer& buffer,
                       const PpoConfig& config, PpoOptimizers& optimizers, const ActorRegularizer* regularizer,
                       Rng& rng);

}  // namespace cdrlab::ppo
