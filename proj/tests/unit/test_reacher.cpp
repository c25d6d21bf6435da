#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cdrlab/env/reacher.hpp"
#include "cdrlab/errors.hpp"
#include "oracles.hpp"

using namespace cdrlab;
using namespace cdrlab::env;

namespace {

std::vector<StepResult> run_script(ReacherEnv& env, std::uint64_t seed, const std::vector<Action>& actions) {
  env.reset(seed);
  std::vector<StepResult> out;
  for (const auto& a : actions) {
    if (env.episode_over()) break;
    out.push_back(env.step(a));
  }
  return out;
}

}  // namespace

TEST(Reacher, RewardFormula) {
  EXPECT_DOUBLE_EQ(reacher_reward(0.25, false, 3, 500), -0.25);
  EXPECT_DOUBLE_EQ(reacher_reward(0.25, true, 490, 500), -2.5);
  EXPECT_DOUBLE_EQ(reacher_reward(0.0, true, 10, 500), 0.0);
}

TEST(Reacher, ResetObservation) {
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  const Observation o = env.reset(1);
  EXPECT_NEAR(o[0], 0.5814 - 0.8, 1e-15);
  EXPECT_NEAR(o[1], 0.4897, 1e-15);
  EXPECT_NEAR(o[2], 0.1260 - 0.3, 1e-15);
  EXPECT_EQ(o[3], 0.0);
  EXPECT_EQ(o[4], 0.0);
}

TEST(Reacher, FixedSeedGivesBitwiseIdenticalTrajectories) {
  EpisodeSpec spec;
  spec.target_jitter = 0.05;
  ReacherEnv a(ArmModel{}, spec), b(ArmModel{}, spec);
  std::vector<Action> script;
  for (int t = 0; t < 500; ++t) script.push_back({std::sin(0.05 * t), 0.5 * std::cos(0.03 * t) - 0.2});
  const auto ra = run_script(a, 42, script);
  const auto rb = run_script(b, 42, script);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    EXPECT_EQ(ra[i].obs, rb[i].obs);
    EXPECT_EQ(ra[i].reward, rb[i].reward);
    EXPECT_EQ(ra[i].terminated, rb[i].terminated);
  }
  const auto rc = run_script(a, 43, script);
  EXPECT_NE(ra[0].obs, rc[0].obs);
}

TEST(Reacher, TruncatesAtHorizon) {
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  env.reset(0);
  StepResult r;
  for (int t = 0; t < 500; ++t) {
    ASSERT_FALSE(env.episode_over());
    r = env.step({0.0, 0.0});
    EXPECT_EQ(r.step_index, t);
  }
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.terminated);
  EXPECT_THROW(env.step({0.0, 0.0}), UsageError);
}

TEST(Reacher, TerminalRewardOnScriptedLimitViolation) {
  // Joint 1 at full speed gains 20 deg/s * 0.02 s per step, so it passes
  // 2 rad on the 287th step; starting at index 204 puts that at t = 490.
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  env.reset(0);
  StepResult r;
  int t = 0;
  for (; t < 500 && !env.episode_over(); ++t) r = env.step({t < 204 ? 0.0 : 1.0, 0.0});
  ASSERT_TRUE(r.terminated);
  EXPECT_EQ(r.step_index, 490);
  const JointVec q = env.joint_state().q;
  EXPECT_GT(q[0], 2.0);
  const auto ee = oracle::fk_homogeneous(0.4, 0.4, 0.3, q[0], q[1]);
  const auto tgt = EpisodeSpec{}.target;
  const double d = std::sqrt((ee[0] - tgt[0]) * (ee[0] - tgt[0]) + (ee[1] - tgt[1]) * (ee[1] - tgt[1]) +
                             (ee[2] - tgt[2]) * (ee[2] - tgt[2]));
  EXPECT_NEAR(r.reward, -d * 10.0, 1e-12);
}

TEST(Reacher, ActionsAreClampedToMaxSpeed) {
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  env.reset(0);
  env.step({5.0, -7.0});
  const double vmax = ArmModel{}.max_joint_speed;
  EXPECT_DOUBLE_EQ(env.joint_state().qdot[0], vmax);
  EXPECT_DOUBLE_EQ(env.joint_state().qdot[1], -vmax);
  EXPECT_DOUBLE_EQ(env.joint_state().q[0], 0.02 * vmax);
}

TEST(Reacher, RejectsNonFiniteActionsAndStepBeforeReset) {
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  EXPECT_THROW(env.step({0.0, 0.0}), UsageError);
  env.reset(0);
  EXPECT_THROW(env.step({std::numeric_limits<double>::quiet_NaN(), 0.0}), InputError);
}

TEST(Reacher, DriveLagSlowsResponse) {
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  env.set_drive_alpha({0.5, 1.0});
  env.reset(0);
  env.step({1.0, 1.0});
  const double vmax = ArmModel{}.max_joint_speed;
  EXPECT_DOUBLE_EQ(env.joint_state().qdot[0], 0.5 * vmax);
  EXPECT_DOUBLE_EQ(env.joint_state().qdot[1], vmax);
}

TEST(Reacher, UnreachableTargetIsConfigError) {
  EpisodeSpec spec;
  spec.target = {2.0, 0.0, 0.3};
  EXPECT_THROW(ReacherEnv(ArmModel{}, spec), ConfigError);
}

TEST(Reacher, RewardBoundedByTargetDistance) {
  // Per-step reward never drops below -(reach + |target - base|) * (T - t).
  ReacherEnv env(ArmModel{}, EpisodeSpec{});
  const ArmModel m;
  const double bound = m.reach() + distance(EpisodeSpec{}.target, m.base());
  env.reset(5);
  for (int t = 0; t < 500 && !env.episode_over(); ++t) {
    const auto r = env.step({std::sin(0.1 * t), 1.0});
    EXPECT_GE(r.reward, -bound * (500 - r.step_index));
    EXPECT_LE(r.reward, 0.0);
  }
}
