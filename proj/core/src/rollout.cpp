#include "cdrlab/ppo/rollout.hpp"

#include "cdrlab/errors.hpp"

namespace cdrlab::ppo {

nn::Vector to_vector(const env::Observation& obs) {
  return Eigen::Map<const nn::Vector>(obs.data(), static_cast<Eigen::Index>(obs.size()));
}

env::Action to_action(const nn::Vector& a) {
  if (a.size() != static_cast<Eigen::Index>(env::kActionDim)) throw_usage("to_action: dimension mismatch");
  return {a(0), a(1)};
}

RolloutBuffer RolloutCollector::collect(const nn::GaussianPolicy& policy, const nn::Critic& critic, int horizon,
                                        Rng& rng) {
  if (horizon < 1) throw_usage("collect_rollout: horizon must be >= 1");
  if (policy.obs_dim() != static_cast<int>(env::kObsDim)) throw ConfigError("policy/env observation size mismatch");
  const auto n = static_cast<Eigen::Index>(horizon);
  RolloutBuffer buf;
  buf.obs.resize(policy.obs_dim(), n);
  buf.actions.resize(policy.action_dim(), n);
  buf.logprob_old.resize(n);
  buf.value_old.resize(n);
  buf.rewards.resize(n);
  buf.next_values = nn::Vector::Zero(n);
  buf.terminal.assign(static_cast<std::size_t>(horizon), 0);
  buf.truncated.assign(static_cast<std::size_t>(horizon), 0);

  for (Eigen::Index t = 0; t < n; ++t) {
    if (need_reset_) {
      obs_ = env_.reset(rng());
      need_reset_ = false;
      episode_return_ = 0.0;
    }
    const nn::Vector x = to_vector(obs_);
    const nn::ActionSample s = nn::sample_action(policy, x, rng);
    buf.obs.col(t) = x;
    buf.actions.col(t) = s.action;
    buf.logprob_old(t) = s.logprob;
    buf.value_old(t) = critic.value(x);

    const env::StepResult r = env_.step(to_action(s.action));
    ++total_steps_;
    buf.rewards(t) = r.reward;
    episode_return_ += r.reward;
    obs_ = r.obs;
    const auto ut = static_cast<std::size_t>(t);
    buf.terminal[ut] = r.terminated ? 1 : 0;
    buf.truncated[ut] = r.truncated ? 1 : 0;
    if (r.truncated) buf.next_values(t) = critic.value(to_vector(r.obs));
    if (r.done()) {
      finished_.push_back(episode_return_);
      need_reset_ = true;
    }
  }
  for (Eigen::Index t = 0; t + 1 < n; ++t) {
    if (!buf.episode_end(static_cast<std::size_t>(t))) buf.next_values(t) = buf.value_old(t + 1);
  }
  if (!buf.episode_end(static_cast<std::size_t>(n - 1))) buf.next_values(n - 1) = critic.value(to_vector(obs_));
  return buf;
}

std::vector<double> RolloutCollector::take_finished_returns() {
  std::vector<double> out;
  out.swap(finished_);
  return out;
}

RolloutBuffer collect_rollout(env::Environment& env, const nn::GaussianPolicy& policy, const nn::Critic& critic,
                              int horizon, Rng& rng) {
  RolloutCollector c(env);
  return c.collect(policy, critic, horizon, rng);
}

}  // namespace cdrlab::ppo
