#include "cdrlab/continual/continual.hpp"

#include <algorithm>

#include "cdrlab/errors.hpp"
#include "cdrlab/ppo/rollout.hpp"

namespace cdrlab::continual {

FisherReplayBuffer collect_fisher_samples(env::Environment& env, const nn::GaussianPolicy& policy,
                                          int target_count, int max_episodes, Rng& rng) {
  FisherReplayBuffer buf;
  const int target = std::max(target_count, 0);
  buf.obs.resize(policy.obs_dim(), target);
  buf.actions.resize(policy.action_dim(), target);
  int stored = 0;
  while (stored < target && buf.episodes < max_episodes) {
    env::Observation obs = env.reset(rng());
    ++buf.episodes;
    while (stored < target) {
      const nn::Vector x = ppo::to_vector(obs);
      const nn::ActionSample s = nn::sample_action(policy, x, rng);
      buf.obs.col(stored) = x;
      buf.actions.col(stored) = s.action;
      ++stored;
      const env::StepResult r = env.step(ppo::to_action(s.action));
      if (r.done()) break;
      obs = r.obs;
    }
  }
  buf.obs.conservativeResize(Eigen::NoChange, stored);
  buf.actions.conservativeResize(Eigen::NoChange, stored);
  return buf;
}

nn::Vector compute_fisher_diag(const nn::GaussianPolicy& policy, const FisherReplayBuffer& buffer, int batch_size) {
  if (batch_size < 1) throw_usage("compute_fisher_diag: batch_size must be >= 1");
  nn::Vector fisher = nn::Vector::Zero(static_cast<Eigen::Index>(policy.num_params()));
  const Eigen::Index n = buffer.obs.cols();
  if (n == 0) return fisher;
  for (Eigen::Index begin = 0; begin < n; begin += batch_size) {
    const Eigen::Index b = std::min<Eigen::Index>(batch_size, n - begin);
    const nn::PolicyBatch pb =
        nn::evaluate_batch(policy, buffer.obs.middleCols(begin, b), buffer.actions.middleCols(begin, b));
    nn::accumulate_logprob_grad_squared(policy, pb, fisher);
  }
  fisher /= static_cast<double>(n);
  return fisher;
}

nn::Vector normalize_fisher(const nn::Vector& fisher) {
  if (fisher.size() == 0) return fisher;
  if ((fisher.array() < 0.0).any() || !fisher.allFinite()) {
    throw InvariantError("normalize_fisher: Fisher diagonal must be finite and nonnegative");
  }
  const double mx = fisher.maxCoeff();
  return mx > 0.0 ? nn::Vector(fisher / mx) : fisher;
}

namespace {

void check_lengths(const nn::Vector& theta, const nn::Vector& star, const nn::Vector& f) {
  if (star.size() != theta.size() || f.size() != theta.size()) {
    throw_usage("continual penalty: anchor length does not match parameter vector");
  }
}

}  // namespace

Penalty ewc_penalty(const nn::Vector& theta, const EwcState& state) {
  Penalty p{0.0, nn::Vector::Zero(theta.size())};
  for (const auto& a : state.anchors) {
    check_lengths(theta, a.theta_star, a.fisher);
    const nn::Vector diff = theta - a.theta_star;
    const nn::Vector weighted = a.fisher.cwiseProduct(diff);
    p.value += 0.5 * a.lambda * weighted.dot(diff);
    p.gradient += a.lambda * weighted;
  }
  return p;
}

Penalty online_penalty(const nn::Vector& theta, const OnlineEwcState& state) {
  Penalty p{0.0, nn::Vector::Zero(theta.size())};
  if (state.consolidations == 0) return p;
  check_lengths(theta, state.theta_star, state.f_star);
  const double w = state.gamma_in_penalty ? state.gamma : 1.0;
  const nn::Vector diff = theta - state.theta_star;
  const nn::Vector weighted = (w * state.f_star).cwiseProduct(diff);
  p.value = 0.5 * state.lambda * weighted.dot(diff);
  p.gradient = state.lambda * weighted;
  return p;
}

void consolidate_offline(EwcState& state, const nn::GaussianPolicy& policy, const nn::Vector& fisher_normalized,
                         double lambda) {
  if (fisher_normalized.size() != static_cast<Eigen::Index>(policy.num_params())) {
    throw_usage("consolidate_offline: Fisher length does not match actor parameters");
  }
  state.anchors.push_back({policy.flatten(), fisher_normalized, lambda});
}

void consolidate_online(OnlineEwcState& state, const nn::GaussianPolicy& policy, const nn::Vector& fisher_normalized) {
  if (fisher_normalized.size() != static_cast<Eigen::Index>(policy.num_params())) {
    throw_usage("consolidate_online: Fisher length does not match actor parameters");
  }
  if (state.consolidations == 0 || state.f_star.size() != fisher_normalized.size()) {
    state.f_star = nn::Vector::Zero(fisher_normalized.size());
  }
  state.f_star = state.gamma * state.f_star + fisher_normalized;
  state.theta_star = policy.flatten();
  ++state.consolidations;
}

std::size_t anchor_count(const ContinualState& state) {
  if (const auto* e = std::get_if<EwcState>(&state)) return e->anchors.size();
  if (const auto* o = std::get_if<OnlineEwcState>(&state)) return o->consolidations > 0 ? 1 : 0;
  return 0;
}

double ContinualRegularizer::penalty(const nn::Vector& theta, Eigen::Ref<nn::Vector> grad) const {
  Penalty p;
  if (const auto* e = std::get_if<EwcState>(&state_)) {
    if (e->anchors.empty()) return 0.0;
    p = ewc_penalty(theta, *e);
  } else if (const auto* o = std::get_if<OnlineEwcState>(&state_)) {
    if (o->consolidations == 0) return 0.0;
    p = online_penalty(theta, *o);
  } else {
    return 0.0;
  }
  grad += p.gradient;
  return p.value;
}

}  // namespace cdrlab::continual
