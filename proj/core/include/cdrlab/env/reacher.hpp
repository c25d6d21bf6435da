#pragma once

#include <array>
#include <cstdint>

#include "cdrlab/env/arm.hpp"
#include "cdrlab/seeding.hpp"

namespace cdrlab::env {

inline constexpr std::size_t kObsDim = 5;
inline constexpr std::size_t kActionDim = 2;

// [dx, dy, dz, q1, q2] with d = target - end_effector.
using Observation = std::array<double, kObsDim>;
// Normalized joint-velocity command, each component in [-1, 1] after clamping.
using Action = std::array<double, kActionDim>;

struct EpisodeSpec {
  int horizon = 500;
  double dt = 0.02;
  Vec3 target{0.5814, 0.4897, 0.1260};
  JointVec start_q{0.0, 0.0};
  // Optional per-axis uniform jitter (m) of the target, drawn from the reset seed.
  double target_jitter = 0.0;

  void validate(const ArmModel& model) const;
};

struct StepResult {
  Observation obs{};
  double reward = 0.0;
  bool terminated = false;  // termination condition fired (limit or floor)
  bool truncated = false;   // horizon reached without termination
  int step_index = 0;       // 0-based index of the step just taken
  Vec3 ee_pos{};

  bool done() const { return terminated || truncated; }
};

// Reacher reward: -d, or -d * (horizon - step_index) when the episode terminates.
double reacher_reward(double dist, bool terminated, int step_index, int horizon);

// First-order drive lag: qdot + alpha * (cmd - qdot). alpha = 1 tracks instantly.
double drive_lag(double qdot, double cmd, double alpha);

// Common surface for the bare reacher and its randomized wrapper.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual Observation reset(std::uint64_t seed) = 0;
  virtual StepResult step(const Action& action) = 0;
  virtual const EpisodeSpec& spec() const = 0;
  virtual const ArmModel& model() const = 0;
  virtual Vec3 target() const = 0;
  virtual Vec3 end_effector() const = 0;
  virtual bool episode_over() const = 0;
};

class ReacherEnv final : public Environment {
 public:
  ReacherEnv(ArmModel model, EpisodeSpec spec);

  Observation reset(std::uint64_t seed) override;
  StepResult step(const Action& action) override;

  const EpisodeSpec& spec() const override { return spec_; }
  const ArmModel& model() const override { return model_; }
  Vec3 target() const override { return target_; }
  Vec3 end_effector() const override { return forward_kinematics(model_, state_.q); }
  bool episode_over() const override { return done_; }

  const JointState& joint_state() const { return state_; }
  int steps_taken() const { return t_; }

  // Per-joint velocity tracking gain used by drive_lag; reset does not change it.
  void set_drive_alpha(const JointVec& alpha) { drive_alpha_ = alpha; }
  const JointVec& drive_alpha() const { return drive_alpha_; }

  Observation observe() const;

 private:
  ArmModel model_;
  EpisodeSpec spec_;
  JointState state_{};
  Vec3 target_{};
  JointVec drive_alpha_{1.0, 1.0};
  int t_ = 0;
  bool done_ = true;
  Rng rng_{};
};

}  // namespace cdrlab::env
