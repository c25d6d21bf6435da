#pragma once

#include <array>
#include <numbers>
#include <span>
#include <vector>

namespace cdrlab::env {

using Vec3 = std::array<double, 3>;
using JointVec = std::array<double, 2>;

inline constexpr std::size_t kNumJoints = 2;
inline constexpr int kPointsPerLink = 10;

struct JointLimits {
  double lo = -2.0;
  double hi = 2.0;
};

// Two-joint arm: joint 1 yaws about the vertical axis at (0, 0, base_height),
// joint 2 sits at the tip of link 1 and pitches link 2 about the horizontal
// axis perpendicular to link 1. Positive q2 lowers the end-effector.
struct ArmModel {
  JointVec link_lengths{0.4, 0.4};
  std::array<JointLimits, kNumJoints> joint_limits{};
  double max_joint_speed = 20.0 * std::numbers::pi / 180.0;  // rad/s
  double base_height = 0.3;
  double floor_z = 0.0;

  double reach() const { return link_lengths[0] + link_lengths[1]; }
  Vec3 base() const { return {0.0, 0.0, base_height}; }
  // Throws ConfigError when the model is not physically meaningful.
  void validate() const;
};

struct JointState {
  JointVec q{0.0, 0.0};
  JointVec qdot{0.0, 0.0};
};

Vec3 forward_kinematics(const ArmModel& model, const JointVec& q);

// kPointsPerLink evenly spaced points along each link (excluding the base).
// The last entry is the end-effector.
std::vector<Vec3> link_sample_points(const ArmModel& model, const JointVec& q);

bool joints_within_limits(const ArmModel& model, const JointVec& q);

// True iff a joint is outside its limits or any sampled point lies below the floor.
bool check_termination(const ArmModel& model, const JointVec& q, std::span<const Vec3> points);
bool check_termination(const ArmModel& model, const JointVec& q);

double distance(const Vec3& a, const Vec3& b);

}  // namespace cdrlab::env
