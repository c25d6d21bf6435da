#include "cdrlab/randomization/randomization.hpp"

#include <cmath>
#include <string>

#include "cdrlab/errors.hpp"

namespace cdrlab::randomization {

namespace {

void check_range(const Range& r, const Range& bounds, const std::string& name) {
  if (!(r.lo <= r.hi)) throw_config(name + ": range needs lo <= hi");
  if (!bounds.contains(r.lo) || !bounds.contains(r.hi)) {
    throw_config(name + ": range must lie within [" + std::to_string(bounds.lo) + ", " +
                 std::to_string(bounds.hi) + "]");
  }
}

double log_uniform(const Range& r, Rng& rng) {
  std::uniform_real_distribution<double> u(std::log(r.lo), std::log(r.hi));
  return std::exp(u(rng));
}

}  // namespace

RandomizationSet RandomizationSet::full() {
  RandomizationSet s;
  s.latency = kLatencyBounds;
  s.noise = kNoiseBounds;
  s.torque = TorqueRanges{};
  return s;
}

void RandomizationSet::validate() const {
  if (latency) check_range(*latency, kLatencyBounds, "randomization.latency");
  if (noise) check_range(*noise, kNoiseBounds, "randomization.noise");
  if (torque) {
    check_range(torque->stiffness, kDriveBounds, "randomization.torque.stiffness");
    check_range(torque->damping, kDriveBounds, "randomization.torque.damping");
  }
}

void ProxyRealConfig::validate() const {
  auto strictly_inside = [](double x, const Range& b) { return x > b.lo && x < b.hi; };
  if (!strictly_inside(latency_s, kLatencyBounds)) throw_config("proxy_real.latency must lie in (0, 1) s");
  if (!strictly_inside(noise_pct, kNoiseBounds)) throw_config("proxy_real.noise must lie in (0, 10) %");
  if (!strictly_inside(stiffness, kDriveBounds) || !strictly_inside(damping, kDriveBounds)) {
    throw_config("proxy_real.stiffness/damping must lie in (10, 1000)");
  }
}

EpisodeDraw ProxyRealConfig::draw(double dt) const {
  EpisodeDraw d;
  d.delay_steps = static_cast<int>(std::lround(latency_s / dt));
  d.noise_pct = noise_pct;
  d.torque_active = true;
  d.stiffness = {stiffness, stiffness};
  d.damping = {damping, damping};
  return d;
}

NoiseRanges NoiseRanges::for_arm(const env::ArmModel& model) {
  NoiseRanges r;
  r.delta = 2.0 * model.reach();
  r.joint = model.joint_limits[0].hi - model.joint_limits[0].lo;
  return r;
}

EpisodeDraw sample_episode_params(const RandomizationSet& set, double dt, Rng& rng) {
  EpisodeDraw d;
  if (set.latency) {
    std::uniform_real_distribution<double> u(set.latency->lo, set.latency->hi);
    d.delay_steps = static_cast<int>(std::lround(u(rng) / dt));
  }
  if (set.noise) {
    std::uniform_real_distribution<double> u(set.noise->lo, set.noise->hi);
    d.noise_pct = u(rng);
  }
  if (set.torque) {
    d.torque_active = true;
    for (std::size_t j = 0; j < env::kNumJoints; ++j) {
      d.stiffness[j] = log_uniform(set.torque->stiffness, rng);
      d.damping[j] = log_uniform(set.torque->damping, rng);
    }
  }
  return d;
}

const env::Observation& apply_latency(const std::vector<env::Observation>& history, std::size_t t,
                                      int delay_steps) {
  if (t >= history.size()) throw_usage("apply_latency: history does not contain step t");
  const std::size_t delay = static_cast<std::size_t>(std::max(delay_steps, 0));
  return history[t > delay ? t - delay : 0];
}

env::Observation apply_noise(const env::Observation& obs, double noise_pct,
                             const std::array<double, env::kObsDim>& component_ranges, Rng& rng) {
  if (noise_pct == 0.0) return obs;
  env::Observation out = obs;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < env::kObsDim; ++i) {
    out[i] += u(rng) * (noise_pct / 100.0) * component_ranges[i];
  }
  return out;
}

double drive_alpha(double stiffness, double damping, double dt) {
  return std::clamp(dt * stiffness / damping, 0.0, 1.0);
}

double velocity_response(double qdot, double qdot_cmd, double stiffness, double damping, double dt) {
  return env::drive_lag(qdot, qdot_cmd, drive_alpha(stiffness, damping, dt));
}

RandomizedEnv::RandomizedEnv(env::ArmModel model, env::EpisodeSpec spec, EnvRandomization randomization)
    : inner_(model, spec), randomization_(std::move(randomization)) {
  randomization_.set.validate();
  if (randomization_.proxy_real) {
    if (!randomization_.set.empty()) {
      throw_config("environment cannot use both a randomization set and a proxy-real draw");
    }
    randomization_.proxy_real->validate();
  }
  if (!(randomization_.noise_ranges.delta > 0.0) || !(randomization_.noise_ranges.joint > 0.0)) {
    throw_config("noise ranges must be > 0");
  }
  noise_scale_ = randomization_.noise_ranges.per_component();
  history_.reserve(static_cast<std::size_t>(spec.horizon) + 1);
}

env::Observation RandomizedEnv::reset(std::uint64_t seed) {
  draw_rng_.seed(derive_seed(seed, stream::kEnvDraw));
  noise_rng_.seed(derive_seed(seed, stream::kEnvNoise));
  const double dt = inner_.spec().dt;
  draw_ = randomization_.proxy_real ? randomization_.proxy_real->draw(dt)
                                    : sample_episode_params(randomization_.set, dt, draw_rng_);
  ++log_.episodes;
  if (!randomization_.proxy_real) {
    if (randomization_.set.latency) ++log_.latency;
    if (randomization_.set.noise) ++log_.noise;
    if (randomization_.set.torque) ++log_.torque;
  }

  env::JointVec alpha{1.0, 1.0};
  if (draw_.torque_active) {
    for (std::size_t j = 0; j < env::kNumJoints; ++j) {
      alpha[j] = drive_alpha(draw_.stiffness[j], draw_.damping[j], dt);
    }
  }
  inner_.set_drive_alpha(alpha);

  history_.clear();
  history_.push_back(inner_.reset(seed));
  return present(0);
}

env::StepResult RandomizedEnv::step(const env::Action& action) {
  env::StepResult r = inner_.step(action);
  history_.push_back(r.obs);
  r.obs = present(history_.size() - 1);
  return r;
}

env::Observation RandomizedEnv::present(std::size_t t) {
  const env::Observation& delayed = apply_latency(history_, t, draw_.delay_steps);
  return apply_noise(delayed, draw_.noise_pct, noise_scale_, noise_rng_);
}

RandomizedEnv make_env(const env::ArmModel& model, const env::EpisodeSpec& spec,
                       const EnvRandomization& randomization) {
  return RandomizedEnv(model, spec, randomization);
}

}  // namespace cdrlab::randomization
