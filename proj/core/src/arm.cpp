#include "cdrlab/env/arm.hpp"

#include <cmath>

#include "cdrlab/errors.hpp"

namespace cdrlab::env {

void ArmModel::validate() const {
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (!(link_lengths[j] > 0.0)) throw_config("arm.link_lengths must be > 0");
    if (!(joint_limits[j].lo < joint_limits[j].hi)) throw_config("arm.joint_limits need lo < hi");
  }
  if (!(max_joint_speed > 0.0)) throw_config("arm.max_joint_speed must be > 0");
  if (!std::isfinite(base_height) || !std::isfinite(floor_z)) {
    throw_config("arm.base_height and arm.floor_z must be finite");
  }
}

namespace {

// Elbow position and the unit direction of link 2.
struct Frames {
  Vec3 elbow;
  Vec3 dir2;
};

Frames frames(const ArmModel& m, const JointVec& q) {
  const double c1 = std::cos(q[0]);
  const double s1 = std::sin(q[0]);
  const double c2 = std::cos(q[1]);
  const double s2 = std::sin(q[1]);
  return {{m.link_lengths[0] * c1, m.link_lengths[0] * s1, m.base_height}, {c2 * c1, c2 * s1, -s2}};
}

}  // namespace

Vec3 forward_kinematics(const ArmModel& model, const JointVec& q) {
  const auto [elbow, dir2] = frames(model, q);
  const double l2 = model.link_lengths[1];
  return {elbow[0] + l2 * dir2[0], elbow[1] + l2 * dir2[1], elbow[2] + l2 * dir2[2]};
}

std::vector<Vec3> link_sample_points(const ArmModel& model, const JointVec& q) {
  const auto [elbow, dir2] = frames(model, q);
  const Vec3 base = model.base();
  std::vector<Vec3> pts;
  pts.reserve(2 * kPointsPerLink);
  for (int k = 1; k <= kPointsPerLink; ++k) {
    const double f = static_cast<double>(k) / kPointsPerLink;
    pts.push_back({base[0] + f * (elbow[0] - base[0]), base[1] + f * (elbow[1] - base[1]),
                   base[2] + f * (elbow[2] - base[2])});
  }
  const double l2 = model.link_lengths[1];
  for (int k = 1; k < kPointsPerLink; ++k) {
    const double s = l2 * static_cast<double>(k) / kPointsPerLink;
    pts.push_back({elbow[0] + s * dir2[0], elbow[1] + s * dir2[1], elbow[2] + s * dir2[2]});
  }
  // Exact end-effector, so the floor check at the tip agrees with forward_kinematics bitwise.
  pts.push_back(forward_kinematics(model, q));
  return pts;
}

bool joints_within_limits(const ArmModel& model, const JointVec& q) {
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (q[j] < model.joint_limits[j].lo || q[j] > model.joint_limits[j].hi) return false;
  }
  return true;
}

bool check_termination(const ArmModel& model, const JointVec& q, std::span<const Vec3> points) {
  if (!joints_within_limits(model, q)) return true;
  for (const auto& p : points) {
    if (p[2] < model.floor_z) return true;
  }
  return false;
}

bool check_termination(const ArmModel& model, const JointVec& q) {
  const auto pts = link_sample_points(model, q);
  return check_termination(model, q, pts);
}

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace cdrlab::env
