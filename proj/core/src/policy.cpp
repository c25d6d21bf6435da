#include "cdrlab/nn/policy.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cdrlab/errors.hpp"

namespace cdrlab::nn {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

}  // namespace

GaussianPolicy::GaussianPolicy(Architecture arch, double initial_log_std)
    : mean(std::move(arch)), log_std(Vector::Constant(mean.architecture().output_dim, initial_log_std)) {}

Vector GaussianPolicy::flatten() const {
  Vector flat(static_cast<Eigen::Index>(num_params()));
  const auto n = static_cast<Eigen::Index>(mean.num_params());
  flat.head(n) = mean.flatten();
  flat.tail(log_std.size()) = log_std;
  return flat;
}

void GaussianPolicy::unflatten(const Eigen::Ref<const Vector>& flat) {
  if (flat.size() != static_cast<Eigen::Index>(num_params())) throw_usage("GaussianPolicy::unflatten: size mismatch");
  const auto n = static_cast<Eigen::Index>(mean.num_params());
  mean.unflatten(flat.head(n));
  log_std = flat.tail(log_std.size());
}

Critic::Critic(Architecture arch) : net(std::move(arch)) {
  if (net.architecture().output_dim != 1) throw_usage("Critic: output_dim must be 1");
}

GaussianPolicy make_policy(int obs_dim, int action_dim, const std::vector<int>& hidden, Rng& rng) {
  GaussianPolicy p(Architecture{obs_dim, hidden, action_dim});
  p.mean.init_orthogonal(std::numbers::sqrt2, 0.01, rng);
  return p;
}

Critic make_critic(int obs_dim, const std::vector<int>& hidden, Rng& rng) {
  Critic c(Architecture{obs_dim, hidden, 1});
  c.net.init_orthogonal(std::numbers::sqrt2, 1.0, rng);
  return c;
}

double policy_logprob(const GaussianPolicy& policy, const Vector& obs, const Vector& action) {
  if (action.size() != policy.action_dim()) throw_usage("policy_logprob: action dimension mismatch");
  const Vector mu = policy.mean.forward(obs);
  double lp = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double z = (action(i) - mu(i)) * std::exp(-policy.log_std(i));
    lp += -0.5 * z * z - policy.log_std(i) - kHalfLog2Pi;
  }
  return lp;
}

PolicyBatch evaluate_batch(const GaussianPolicy& policy, const Matrix& obs, const Matrix& actions) {
  if (actions.rows() != policy.action_dim() || actions.cols() != obs.cols()) {
    throw_usage("evaluate_batch: action batch shape mismatch");
  }
  PolicyBatch b;
  b.mean = policy.mean.forward(obs, b.tape);
  const Vector inv_std = (-policy.log_std.array()).exp();
  b.z = (actions - b.mean).array().colwise() * inv_std.array();
  const double const_term = -policy.log_std.sum() - kHalfLog2Pi * static_cast<double>(policy.action_dim());
  b.logprob = (-0.5 * b.z.array().square().colwise().sum()).transpose() + const_term;
  return b;
}

void accumulate_logprob_grad(const GaussianPolicy& policy, const PolicyBatch& batch, const Vector& weights,
                             Eigen::Ref<Vector> grad) {
  const auto n = static_cast<Eigen::Index>(policy.mean.num_params());
  const Vector inv_std = (-policy.log_std.array()).exp();
  // d logprob / d mean = z / std
  Matrix upstream = batch.z.array().colwise() * inv_std.array();
  upstream.array().rowwise() *= weights.transpose().array();
  policy.mean.backward(batch.tape, upstream, grad.head(n));
  // d logprob / d log_std = z^2 - 1
  grad.tail(policy.log_std.size()) += (batch.z.array().square() - 1.0).matrix() * weights;
}

void accumulate_logprob_grad_squared(const GaussianPolicy& policy, const PolicyBatch& batch,
                                     Eigen::Ref<Vector> grad_sq) {
  const auto n = static_cast<Eigen::Index>(policy.mean.num_params());
  const Vector inv_std = (-policy.log_std.array()).exp();
  const Matrix upstream = batch.z.array().colwise() * inv_std.array();
  policy.mean.backward_squared(batch.tape, upstream, grad_sq.head(n));
  grad_sq.tail(policy.log_std.size()) += (batch.z.array().square() - 1.0).square().rowwise().sum().matrix();
}

Vector grad_logprob(const GaussianPolicy& policy, const Vector& obs, const Vector& action) {
  const PolicyBatch b = evaluate_batch(policy, obs, action);
  Vector g = Vector::Zero(static_cast<Eigen::Index>(policy.num_params()));
  accumulate_logprob_grad(policy, b, Vector::Ones(1), g);
  return g;
}

ActionSample sample_action(const GaussianPolicy& policy, const Vector& obs, Rng& rng, bool deterministic) {
  const Vector mu = policy.mean.forward(obs);
  ActionSample s;
  if (deterministic) {
    s.action = mu;
  } else {
    std::normal_distribution<double> n01(0.0, 1.0);
    s.action.resize(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) s.action(i) = mu(i) + std::exp(policy.log_std(i)) * n01(rng);
  }
  s.logprob = policy_logprob(policy, obs, s.action);
  return s;
}

double gaussian_entropy(const Vector& log_std) {
  return log_std.sum() + static_cast<double>(log_std.size()) * (0.5 + kHalfLog2Pi);
}

}  // namespace cdrlab::nn
