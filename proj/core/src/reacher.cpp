#include "cdrlab/env/reacher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cdrlab/errors.hpp"

namespace cdrlab::env {

void EpisodeSpec::validate(const ArmModel& model) const {
  model.validate();
  if (horizon < 1) throw_config("episode.horizon must be >= 1");
  if (!(dt > 0.0)) throw_config("episode.dt must be > 0");
  if (!(target_jitter >= 0.0)) throw_config("episode.target_jitter must be >= 0");
  if (distance(target, model.base()) > model.reach()) {
    throw_config("episode.target is unreachable: |target - base| exceeds total link length");
  }
  if (!joints_within_limits(model, start_q)) throw_config("episode.start_q violates joint limits");
}

double reacher_reward(double dist, bool terminated, int step_index, int horizon) {
  return terminated ? -dist * static_cast<double>(horizon - step_index) : -dist;
}

double drive_lag(double qdot, double cmd, double alpha) { return qdot + alpha * (cmd - qdot); }

ReacherEnv::ReacherEnv(ArmModel model, EpisodeSpec spec) : model_(model), spec_(spec) {
  spec_.validate(model_);
  target_ = spec_.target;
}

Observation ReacherEnv::observe() const {
  const Vec3 ee = forward_kinematics(model_, state_.q);
  return {target_[0] - ee[0], target_[1] - ee[1], target_[2] - ee[2], state_.q[0], state_.q[1]};
}

Observation ReacherEnv::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed, stream::kEnvTarget));
  state_ = JointState{spec_.start_q, {0.0, 0.0}};
  target_ = spec_.target;
  if (spec_.target_jitter > 0.0) {
    std::uniform_real_distribution<double> u(-spec_.target_jitter, spec_.target_jitter);
    const Vec3 base = model_.base();
    for (auto& c : target_) c += u(rng_);
    // Pull jittered targets back inside the reachable ball.
    const double r = distance(target_, base);
    if (r > model_.reach()) {
      const double s = model_.reach() / r;
      for (std::size_t i = 0; i < 3; ++i) target_[i] = base[i] + s * (target_[i] - base[i]);
    }
  }
  t_ = 0;
  done_ = false;
  return observe();
}

StepResult ReacherEnv::step(const Action& action) {
  if (done_) throw_usage("ReacherEnv::step called after the episode ended; call reset()");
  for (double a : action) {
    if (!std::isfinite(a)) throw InputError("ReacherEnv::step received a non-finite action");
  }
  const double vmax = model_.max_joint_speed;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double cmd = std::clamp(action[j], -1.0, 1.0) * vmax;
    const double qdot = drive_lag(state_.qdot[j], cmd, drive_alpha_[j]);
    state_.qdot[j] = std::clamp(qdot, -vmax, vmax);
    state_.q[j] += spec_.dt * state_.qdot[j];
  }

  StepResult r;
  r.step_index = t_;
  r.ee_pos = forward_kinematics(model_, state_.q);
  r.obs = observe();
  r.terminated = check_termination(model_, state_.q);
  r.reward = reacher_reward(distance(r.ee_pos, target_), r.terminated, t_, spec_.horizon);
  ++t_;
  r.truncated = !r.terminated && t_ >= spec_.horizon;
  done_ = r.done();
  return r;
}

}  // namespace cdrlab::env
