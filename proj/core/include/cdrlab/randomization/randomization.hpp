#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdrlab/env/reacher.hpp"
#include "cdrlab/seeding.hpp"

namespace cdrlab::randomization {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Outer bounds every configured range must respect.
inline constexpr Range kLatencyBounds{0.0, 1.0};   // seconds
inline constexpr Range kNoiseBounds{0.0, 10.0};    // percent
inline constexpr Range kDriveBounds{10.0, 1000.0};  // stiffness and damping

struct TorqueRanges {
  Range stiffness{10.0, 1000.0};
  Range damping{10.0, 1000.0};
};

// Which of latency (L), torque (T) and noise (N) are randomized, and over what.
struct RandomizationSet {
  std::optional<Range> latency;
  std::optional<Range> noise;
  std::optional<TorqueRanges> torque;

  bool empty() const { return !latency && !noise && !torque; }
  void validate() const;

  static RandomizationSet none() { return {}; }
  static RandomizationSet full();
};

// One realization of the active parameters, fixed for an episode.
struct EpisodeDraw {
  int delay_steps = 0;
  double noise_pct = 0.0;
  bool torque_active = false;
  env::JointVec stiffness{0.0, 0.0};
  env::JointVec damping{0.0, 0.0};

  bool operator==(const EpisodeDraw&) const = default;
};

// Frozen stand-in for the physical system used at evaluation time.
struct ProxyRealConfig {
  double latency_s = 0.06;
  double noise_pct = 2.0;
  double stiffness = 120.0;
  double damping = 400.0;

  void validate() const;
  EpisodeDraw draw(double dt) const;
};

// Per-component scale noise percentages refer to: a 2 m position range for
// the three delta components (10 % gives +-0.2 m), joint-limit span for the
// joint components.
struct NoiseRanges {
  double delta = 2.0;
  double joint = 4.0;

  static NoiseRanges for_arm(const env::ArmModel& model);
  std::array<double, env::kObsDim> per_component() const {
    return {delta, delta, delta, joint, joint};
  }
};

EpisodeDraw sample_episode_params(const RandomizationSet& set, double dt, Rng& rng);

// Observation the agent sees at step t under the given delay; history[i] is
// the true observation after i steps (history[0] is the reset observation).
const env::Observation& apply_latency(const std::vector<env::Observation>& history, std::size_t t,
                                      int delay_steps);

env::Observation apply_noise(const env::Observation& obs, double noise_pct,
                             const std::array<double, env::kObsDim>& component_ranges, Rng& rng);

double drive_alpha(double stiffness, double damping, double dt);
double velocity_response(double qdot, double qdot_cmd, double stiffness, double damping, double dt);

// Randomization attached to an environment: a per-episode sampled set, or a
// frozen proxy-real draw. Setting both is a configuration conflict.
struct EnvRandomization {
  RandomizationSet set;
  std::optional<ProxyRealConfig> proxy_real;
  NoiseRanges noise_ranges;
};

// Counts of episodes in which each parameter was actually drawn.
struct DrawLog {
  std::int64_t episodes = 0;
  std::int64_t latency = 0;
  std::int64_t noise = 0;
  std::int64_t torque = 0;
};

// Reacher wrapped with torque response, observation latency and observation
// noise, applied in that order on every step.
class RandomizedEnv final : public env::Environment {
 public:
  RandomizedEnv(env::ArmModel model, env::EpisodeSpec spec, EnvRandomization randomization);

  env::Observation reset(std::uint64_t seed) override;
  env::StepResult step(const env::Action& action) override;

  const env::EpisodeSpec& spec() const override { return inner_.spec(); }
  const env::ArmModel& model() const override { return inner_.model(); }
  env::Vec3 target() const override { return inner_.target(); }
  env::Vec3 end_effector() const override { return inner_.end_effector(); }
  bool episode_over() const override { return inner_.episode_over(); }

  const EpisodeDraw& current_draw() const { return draw_; }
  const DrawLog& draw_log() const { return log_; }
  const EnvRandomization& randomization() const { return randomization_; }
  const env::ReacherEnv& inner() const { return inner_; }

 private:
  env::Observation present(std::size_t t);

  env::ReacherEnv inner_;
  EnvRandomization randomization_;
  std::array<double, env::kObsDim> noise_scale_{};
  EpisodeDraw draw_{};
  DrawLog log_{};
  std::vector<env::Observation> history_;
  Rng draw_rng_{};
  Rng noise_rng_{};
};

RandomizedEnv make_env(const env::ArmModel& model, const env::EpisodeSpec& spec,
                       const EnvRandomization& randomization);

}  // namespace cdrlab::randomization
