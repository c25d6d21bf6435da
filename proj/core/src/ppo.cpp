#include "cdrlab/ppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cdrlab/errors.hpp"

namespace cdrlab::ppo {

void PpoConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw_config("ppo.gamma must lie in [0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw_config("ppo.gae_lambda must lie in [0, 1]");
  if (!(clip_range > 0.0)) throw_config("ppo.clip_range must be > 0");
  if (!(learning_rate > 0.0)) throw_config("ppo.learning_rate must be > 0");
  if (epochs < 1) throw_config("ppo.epochs must be >= 1");
  if (minibatches < 1) throw_config("ppo.minibatches must be >= 1");
  if (rollout_horizon < 1) throw_config("ppo.rollout_horizon must be >= 1");
  if (!(value_coef >= 0.0) || !(entropy_coef >= 0.0)) throw_config("ppo coefficients must be >= 0");
}

PpoOptimizers::PpoOptimizers(const nn::GaussianPolicy& policy, const nn::Critic& critic, const PpoConfig& config)
    : actor(policy.num_params(), config.adam()), critic(critic.num_params(), config.adam()) {}

nn::Vector normalize_advantages(const nn::Vector& adv) {
  const Eigen::Index n = adv.size();
  if (n < 2) return adv;
  const double mean = adv.mean();
  const double var = (adv.array() - mean).square().sum() / static_cast<double>(n - 1);
  return (adv.array() - mean) / (std::sqrt(var) + 1e-8);
}

MinibatchLoss minibatch_loss(const nn::GaussianPolicy& policy, const nn::Critic& critic, const nn::Matrix& obs,
                             const nn::Matrix& actions, const nn::Vector& logprob_old, const nn::Vector& advantages,
                             const nn::Vector& returns, const PpoConfig& config, const ActorRegularizer* regularizer) {
  const Eigen::Index b = obs.cols();
  const double inv_b = 1.0 / static_cast<double>(b);
  MinibatchLoss out;
  out.actor_grad = nn::Vector::Zero(static_cast<Eigen::Index>(policy.num_params()));
  out.critic_grad = nn::Vector::Zero(static_cast<Eigen::Index>(critic.num_params()));

  const nn::PolicyBatch pb = nn::evaluate_batch(policy, obs, actions);
  const nn::Vector log_ratio = pb.logprob - logprob_old;
  nn::Vector weights(b);
  const double lo = 1.0 - config.clip_range;
  const double hi = 1.0 + config.clip_range;
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < b; ++i) {
    const double ratio = std::exp(log_ratio(i));
    const double a = advantages(i);
    const double unclipped = ratio * a;
    const double clipped_term = std::clamp(ratio, lo, hi) * a;
    out.surrogate -= std::min(unclipped, clipped_term) * inv_b;
    // The clipped branch is constant in theta whenever it is the minimum.
    weights(i) = (unclipped <= clipped_term) ? -a * ratio * inv_b : 0.0;
    if (ratio < lo || ratio > hi) clipped += 1.0;
    out.approx_kl += ((ratio - 1.0) - log_ratio(i)) * inv_b;
  }
  out.clip_fraction = clipped * inv_b;
  nn::accumulate_logprob_grad(policy, pb, weights, out.actor_grad);

  out.entropy = nn::gaussian_entropy(policy.log_std);
  if (config.entropy_coef != 0.0) out.actor_grad.tail(policy.log_std.size()).array() -= config.entropy_coef;

  if (regularizer != nullptr) out.penalty = regularizer->penalty(policy.flatten(), out.actor_grad);

  nn::Tape tape;
  const nn::Matrix values = critic.net.forward(obs, tape);
  const nn::Matrix err = values - returns.transpose();
  out.critic = config.value_coef * err.array().square().sum() * inv_b;
  const nn::Matrix upstream = (2.0 * config.value_coef * inv_b) * err;
  critic.net.backward(tape, upstream, out.critic_grad);
  return out;
}

UpdateStats ppo_update(nn::GaussianPolicy& policy, nn::Critic& critic, const RolloutBuffer& buffer,
                       const PpoConfig& config, PpoOptimizers& optimizers, const ActorRegularizer* regularizer,
                       Rng& rng) {
  const std::size_t n = buffer.size();
  if (n == 0) throw_usage("ppo_update: empty rollout buffer");
  if (buffer.advantages.size() != static_cast<Eigen::Index>(n)) {
    throw_usage("ppo_update: buffer has no advantages; call compute_advantages first");
  }
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(config.minibatches), n);

  UpdateStats stats;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t end = begin + n / chunks + (c < n % chunks ? 1 : 0);
      const auto b = static_cast<Eigen::Index>(end - begin);
      nn::Matrix obs(buffer.obs.rows(), b);
      nn::Matrix act(buffer.actions.rows(), b);
      nn::Vector lp(b), adv(b), ret(b);
      for (Eigen::Index k = 0; k < b; ++k) {
        const Eigen::Index i = order[begin + static_cast<std::size_t>(k)];
        obs.col(k) = buffer.obs.col(i);
        act.col(k) = buffer.actions.col(i);
        lp(k) = buffer.logprob_old(i);
        adv(k) = buffer.advantages(i);
        ret(k) = buffer.returns(i);
      }
      begin = end;

      const MinibatchLoss loss =
          minibatch_loss(policy, critic, obs, act, lp, normalize_advantages(adv), ret, config, regularizer);

      nn::Vector theta = policy.flatten();
      optimizers.actor.step(theta, loss.actor_grad);
      policy.unflatten(theta);
      nn::Vector phi = critic.net.flatten();
      optimizers.critic.step(phi, loss.critic_grad);
      critic.net.unflatten(phi);

      stats.actor_loss += loss.surrogate;
      stats.critic_loss += loss.critic;
      stats.penalty += loss.penalty;
      stats.entropy += loss.entropy;
      stats.approx_kl += loss.approx_kl;
      stats.clip_fraction += loss.clip_fraction;
      ++stats.gradient_steps;
    }
  }
  const double k = 1.0 / stats.gradient_steps;
  stats.actor_loss *= k;
  stats.critic_loss *= k;
  stats.penalty *= k;
  stats.entropy *= k;
  stats.approx_kl *= k;
  stats.clip_fraction *= k;
  return stats;
}

}  // namespace cdrlab::ppo
