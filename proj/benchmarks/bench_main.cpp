#include <benchmark/benchmark.h>

#include "cdrlab/continual/continual.hpp"
#include "cdrlab/eval/evalkit.hpp"
#include "cdrlab/ppo/gae.hpp"
#include "cdrlab/ppo/ppo.hpp"
#include "cdrlab/randomization/randomization.hpp"

using namespace cdrlab;

static void BM_MlpForward(benchmark::State& state) {
  Rng rng(0);
  const auto policy = nn::make_policy(5, 2, {64, 64}, rng);
  const nn::Matrix x = nn::Matrix::Random(5, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(policy.mean.forward(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(64);

static void BM_MlpBackward(benchmark::State& state) {
  Rng rng(0);
  const auto policy = nn::make_policy(5, 2, {64, 64}, rng);
  const nn::Matrix x = nn::Matrix::Random(5, state.range(0));
  const nn::Matrix up = nn::Matrix::Random(2, state.range(0));
  nn::Vector grad = nn::Vector::Zero(static_cast<Eigen::Index>(policy.mean.num_params()));
  for (auto _ : state) {
    nn::Tape tape;
    policy.mean.forward(x, tape);
    policy.mean.backward(tape, up, grad);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpBackward)->Arg(64);

static void BM_EnvStep(benchmark::State& state) {
  const bool randomized = state.range(0) != 0;
  auto env = randomization::make_env(env::ArmModel{}, env::EpisodeSpec{},
                                     {randomized ? randomization::RandomizationSet::full()
                                                 : randomization::RandomizationSet{}});
  std::uint64_t seed = 0;
  env.reset(seed);
  int t = 0;
  for (auto _ : state) {
    if (env.episode_over()) env.reset(++seed);
    benchmark::DoNotOptimize(env.step({0.3 * std::sin(0.01 * t), -0.2}));
    ++t;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EnvStep)->Arg(0)->Arg(1);

static void BM_PpoUpdate(benchmark::State& state) {
  Rng rng(1);
  auto policy = nn::make_policy(5, 2, {64, 64}, rng);
  auto critic = nn::make_critic(5, {64, 64}, rng);
  auto env = randomization::make_env(env::ArmModel{}, env::EpisodeSpec{}, {});
  ppo::PpoConfig cfg;
  auto buffer = ppo::collect_rollout(env, policy, critic, cfg.rollout_horizon, rng);
  ppo::compute_advantages(buffer, cfg.gamma, cfg.gae_lambda);
  for (auto _ : state) {
    state.PauseTiming();
    auto p = policy;
    auto c = critic;
    ppo::PpoOptimizers opt(p, c, cfg);
    state.ResumeTiming();
    benchmark::DoNotOptimize(ppo::ppo_update(p, c, buffer, cfg, opt, nullptr, rng));
  }
  state.SetItemsProcessed(state.iterations() * cfg.rollout_horizon * cfg.epochs);
}
BENCHMARK(BM_PpoUpdate)->Unit(benchmark::kMillisecond);

static void BM_FisherDiag(benchmark::State& state) {
  Rng rng(2);
  const auto policy = nn::make_policy(5, 2, {64, 64}, rng);
  auto env = randomization::make_env(env::ArmModel{}, env::EpisodeSpec{}, {});
  const auto buf = continual::collect_fisher_samples(env, policy, 5000, 100, rng);
  for (auto _ : state) benchmark::DoNotOptimize(continual::compute_fisher_diag(policy, buf, 32));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(buf.size()));
}
BENCHMARK(BM_FisherDiag)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
