#pragma once

#include "cdrlab/nn/mlp.hpp"

namespace cdrlab::nn {

// Diagonal Gaussian policy: mean from an MLP, state-independent log std.
//
// Flat parameter order: mean-network parameters (Mlp order), then log_std.
struct GaussianPolicy {
  Mlp mean;
  Vector log_std;

  GaussianPolicy() = default;
  GaussianPolicy(Architecture arch, double initial_log_std = 0.0);

  int obs_dim() const { return mean.architecture().input_dim; }
  int action_dim() const { return mean.architecture().output_dim; }
  std::size_t num_params() const { return mean.num_params() + static_cast<std::size_t>(log_std.size()); }

  Vector flatten() const;
  void unflatten(const Eigen::Ref<const Vector>& flat);
};

// Linear-output value network.
struct Critic {
  Mlp net;

  Critic() = default;
  explicit Critic(Architecture arch);

  double value(const Vector& obs) const { return net.forward(obs)(0); }
  std::size_t num_params() const { return net.num_params(); }
};

GaussianPolicy make_policy(int obs_dim, int action_dim, const std::vector<int>& hidden, Rng& rng);
Critic make_critic(int obs_dim, const std::vector<int>& hidden, Rng& rng);

double policy_logprob(const GaussianPolicy& policy, const Vector& obs, const Vector& action);
// Analytic gradient of policy_logprob with respect to the flat parameters.
Vector grad_logprob(const GaussianPolicy& policy, const Vector& obs, const Vector& action);

struct ActionSample {
  Vector action;  // pre-clamp
  double logprob = 0.0;
};

// mean + exp(log_std) * eps, or the mean itself when `deterministic`.
ActionSample sample_action(const GaussianPolicy& policy, const Vector& obs, Rng& rng, bool deterministic = false);

double gaussian_entropy(const Vector& log_std);

// Batched evaluation used by the trainer. Columns are samples.
struct PolicyBatch {
  Tape tape;
  Matrix mean;      // action_dim x B
  Vector logprob;   // B
  Matrix z;         // (action - mean) / std, action_dim x B
};

PolicyBatch evaluate_batch(const GaussianPolicy& policy, const Matrix& obs, const Matrix& actions);

// Adds d/dtheta sum_i weights[i] * logprob_i to `grad`.
void accumulate_logprob_grad(const GaussianPolicy& policy, const PolicyBatch& batch, const Vector& weights,
                             Eigen::Ref<Vector> grad);
// Adds sum_i (d logprob_i / dtheta)^2 to `grad_sq`.
void accumulate_logprob_grad_squared(const GaussianPolicy& policy, const PolicyBatch& batch,
                                     Eigen::Ref<Vector> grad_sq);

}  // namespace cdrlab::nn
