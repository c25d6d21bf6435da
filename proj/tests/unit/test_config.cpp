#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "cdrlab/errors.hpp"
#include "cdrlab/experiment/config.hpp"

using namespace cdrlab;
using namespace cdrlab::experiment;

namespace {

std::string error_of(const std::string& json, std::vector<std::string> overrides = {}) {
  try {
    parse_config(json, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const ExperimentConfig def;
  const auto text = dump_config(def);
  const auto back = parse_config(text);
  EXPECT_EQ(dump_config(back), text);
  EXPECT_EQ(config_hash(back), config_hash(def));
  EXPECT_EQ(dump_config(parse_config("{}")), text);
}

TEST(Config, DefaultsMatchTheExperimentSetup) {
  const ExperimentConfig c;
  EXPECT_EQ(c.ppo.clip_range, 0.1);
  EXPECT_EQ(c.ppo.rollout_horizon, 2048);
  EXPECT_EQ(c.ppo.epochs, 10);
  EXPECT_EQ(c.ppo.minibatches, 32);
  EXPECT_EQ(c.continual.lambda, 5e3);
  EXPECT_EQ(c.continual.online_gamma, 0.95);
  EXPECT_EQ(c.matrix.total_budget, 400000);
  EXPECT_EQ(c.matrix.seeds, 5);
  const auto grid = default_lambda_grid();
  ASSERT_EQ(grid.size(), 10u);
  EXPECT_EQ(grid.front(), 1.0);
  EXPECT_EQ(grid.back(), 5e4);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, UnknownFieldIsNamed) {
  const auto msg = error_of(R"({"ppo": {"clip": 0.2}})");
  EXPECT_NE(msg.find("ppo.clip"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown"), std::string::npos) << msg;
}

TEST(Config, TypeErrorIsNamed) {
  const auto msg = error_of(R"({"ppo": {"epochs": "ten"}, "matrix": {"seeds": 2.5}})");
  EXPECT_NE(msg.find("ppo.epochs"), std::string::npos) << msg;
  EXPECT_NE(msg.find("matrix.seeds"), std::string::npos) << msg;
}

TEST(Config, IntegerAcceptedForFloatField) {
  const auto c = parse_config(R"({"ewc": {"lambda": 100}})");
  EXPECT_EQ(c.continual.lambda, 100.0);
}

TEST(Config, OverridesApplyAfterFile) {
  const std::vector<std::string> ov{"ppo.clip_range=0.2", "matrix.seeds=2", "matrix.strategies=finetuning,cdr-ewc",
                                    "output.dir=elsewhere"};
  const auto c = parse_config(R"({"ppo": {"clip_range": 0.3}})", ov);
  EXPECT_EQ(c.ppo.clip_range, 0.2);
  EXPECT_EQ(c.matrix.seeds, 2);
  ASSERT_EQ(c.matrix.strategies.size(), 2u);
  EXPECT_EQ(c.matrix.strategies[1], strategy::StrategyKind::CdrEwc);
  EXPECT_EQ(c.output.dir, "elsewhere");
  EXPECT_NE(error_of("{}", {"ppo.nope=1"}).find("ppo.nope"), std::string::npos);
  EXPECT_FALSE(error_of("{}", {"no_equals_sign"}).empty());
}

TEST(Config, SemanticValidationListsEveryProblem) {
  const auto msg = error_of(R"({"ppo": {"hidden": [0], "gamma": 2},
                                "matrix": {"total_budget": 400001, "orderings": ["TTN"], "strategies": ["bogus"]}})");
  EXPECT_NE(msg.find("ppo.hidden"), std::string::npos) << msg;
  EXPECT_NE(msg.find("gamma"), std::string::npos) << msg;
  EXPECT_NE(msg.find("TTN"), std::string::npos) << msg;
  EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;
}

TEST(Config, RangeChecks) {
  EXPECT_FALSE(error_of(R"({"randomization": {"latency_s": [0.5, 0.2]}})").empty());
  EXPECT_FALSE(error_of(R"({"randomization": {"noise_pct": [0, 12]}})").empty());
  EXPECT_FALSE(error_of(R"({"randomization": {"proxy_real": {"latency_s": 1.5}}})").empty());
  EXPECT_FALSE(error_of(R"({"env": {"episode": {"target": [3, 0, 0]}}})").empty());
  EXPECT_FALSE(error_of(R"({"ewc": {"lambda": -1}})").empty());
  EXPECT_FALSE(error_of("not json").empty());
}

TEST(Config, HashChangesWithContent) {
  ExperimentConfig a;
  ExperimentConfig b;
  b.ppo.learning_rate *= 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(hash_hex(0xabcULL), "0000000000000abc");
}
