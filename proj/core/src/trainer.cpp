#include "cdrlab/strategy/trainer.hpp"

#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "cdrlab/errors.hpp"
#include "cdrlab/ppo/gae.hpp"

namespace cdrlab::strategy {

randomization::RandomizedEnv EnvSettings::make(const randomization::RandomizationSet& set) const {
  return randomization::make_env(arm, episode, {set, std::nullopt, noise_ranges});
}

randomization::RandomizedEnv EnvSettings::make_proxy_real() const {
  return randomization::make_env(arm, episode, {{}, proxy_real, noise_ranges});
}

continual::ContinualState initial_continual_state(StrategyKind kind, const ContinualSettings& settings) {
  switch (kind) {
    case StrategyKind::CdrEwc:
      return continual::EwcState{};
    case StrategyKind::CdrOnlineEwc: {
      continual::OnlineEwcState s;
      s.gamma = settings.online_gamma;
      s.lambda = settings.lambda;
      s.gamma_in_penalty = settings.online_gamma_in_penalty;
      return s;
    }
    default:
      return std::monostate{};
  }
}

StrategyRun::StrategyRun(RunIdentity id, std::vector<PhasePlan> schedule, EnvSettings env, TrainerSettings trainer)
    : id_(std::move(id)), schedule_(std::move(schedule)), env_(std::move(env)), trainer_(std::move(trainer)) {
  if (schedule_.empty()) throw_config("schedule has no phases");
  trainer_.ppo.validate();
  env_.episode.validate(env_.arm);
  env_.proxy_real.validate();
  for (const auto& p : schedule_) {
    p.randomization.validate();
    if (p.timesteps < 0) throw_config("phase budgets must be >= 0");
  }
  if (trainer_.eval.episodes < 1) throw_config("eval.episodes must be >= 1");
}

long long StrategyRun::eval_interval() const {
  if (trainer_.eval.every_fraction <= 0.0) return std::numeric_limits<long long>::max();
  const double total = static_cast<double>(total_timesteps(schedule_));
  return std::max(1LL, std::llround(trainer_.eval.every_fraction * total));
}

void StrategyRun::initialize() {
  Rng rng(derive_seed(id_.seed, stream::kInit));
  state_ = TrainingState{};
  state_.policy = nn::make_policy(static_cast<int>(env::kObsDim), static_cast<int>(env::kActionDim),
                                  trainer_.hidden, rng);
  state_.critic = nn::make_critic(static_cast<int>(env::kObsDim), trainer_.hidden, rng);
  state_.continual = initial_continual_state(id_.kind, trainer_.continual);
  state_.next_eval_mark = eval_interval();
}

void StrategyRun::restore(TrainingState state) { state_ = std::move(state); }

const PhasePlan& StrategyRun::current_phase() const {
  if (finished()) throw_usage("StrategyRun: schedule already finished");
  return schedule_[static_cast<std::size_t>(state_.phases_completed)];
}

std::vector<eval::EvalRecord> StrategyRun::evaluate_snapshot(int phase) const {
  std::vector<std::uint64_t> seeds;
  for (int e = 0; e < trainer_.eval.episodes; ++e) {
    seeds.push_back(derive_seed(id_.seed, stream::kEval, static_cast<std::uint64_t>(e)));
  }
  eval::RecordKey key{id_.run_id, to_string(id_.kind), id_.ordering, id_.seed, phase, state_.timestep,
                      eval::EvalEnv::Ideal};
  auto ideal = env_.make_ideal();
  auto out = eval::evaluate(state_.policy, ideal, seeds, key, trainer_.eval.d_tgt_squared);
  key.eval_env = eval::EvalEnv::ProxyReal;
  auto proxy = env_.make_proxy_real();
  auto real = eval::evaluate(state_.policy, proxy, seeds, key, trainer_.eval.d_tgt_squared);
  out.insert(out.end(), real.begin(), real.end());
  return out;
}

void StrategyRun::train_current_phase() {
  const PhasePlan& plan = current_phase();
  if (state_.phase_trained) throw_usage("StrategyRun: current phase already trained");
  auto& log = state_.log;

  auto record_eval = [&] {
    auto recs = evaluate_snapshot(plan.phase_index);
    log.eval.insert(log.eval.end(), recs.begin(), recs.end());
  };
  if (state_.timestep == 0 && log.eval.empty()) record_eval();

  PhaseRecord rec{plan.phase_index, plan.label, state_.timestep, state_.timestep, {}, false, 0, 0.0};
  auto env = env_.make(plan.randomization);
  Rng rng(derive_seed(id_.seed, stream::kPhaseTrain, static_cast<std::uint64_t>(plan.phase_index)));
  ppo::PpoOptimizers opt(state_.policy, state_.critic, trainer_.ppo);
  ppo::RolloutCollector collector(env);
  const continual::ContinualRegularizer reg(state_.continual);
  const ppo::ActorRegularizer* hook = is_continual(id_.kind) ? &reg : nullptr;
  const long long interval = eval_interval();

  long long done = 0;
  while (done < plan.timesteps) {
    const int h = static_cast<int>(std::min<long long>(trainer_.ppo.rollout_horizon, plan.timesteps - done));
    ppo::RolloutBuffer buf = collector.collect(state_.policy, state_.critic, h, rng);
    ppo::compute_advantages(buf, trainer_.ppo.gamma, trainer_.ppo.gae_lambda);
    const ppo::UpdateStats st = ppo::ppo_update(state_.policy, state_.critic, buf, trainer_.ppo, opt, hook, rng);
    done += h;
    state_.timestep += h;

    const auto returns = collector.take_finished_returns();
    double mean_ret = std::numeric_limits<double>::quiet_NaN();
    if (!returns.empty()) {
      mean_ret = 0.0;
      for (double r : returns) mean_ret += r;
      mean_ret /= static_cast<double>(returns.size());
    }
    TrainLogRow row{id_.run_id, plan.phase_index, state_.timestep, mean_ret, st.actor_loss, st.critic_loss,
                    st.penalty, st.entropy};
    log.train.push_back(row);
    if (progress_) progress_(row);

    if (!state_.policy.mean.all_finite() || !state_.policy.log_std.allFinite()) {
      throw InvariantError("training diverged: non-finite actor parameters in run " + id_.run_id);
    }
    if (state_.timestep >= state_.next_eval_mark) {
      record_eval();
      while (state_.next_eval_mark <= state_.timestep) state_.next_eval_mark += interval;
    }
  }
  if (log.eval.empty() || log.eval.back().timestep != state_.timestep) record_eval();

  rec.end_timestep = state_.timestep;
  rec.draws = env.draw_log();
  log.phases.push_back(rec);
  state_.phase_trained = true;
}

void StrategyRun::finish_current_phase() {
  const PhasePlan& plan = current_phase();
  if (!state_.phase_trained) throw_usage("StrategyRun: finish_current_phase before training it");
  if (plan.consolidate_after && is_continual(id_.kind)) {
    auto env = env_.make(plan.randomization);
    Rng rng(derive_seed(id_.seed, stream::kFisher, static_cast<std::uint64_t>(plan.phase_index)));
    const auto& fc = trainer_.continual.fisher;
    const auto replay = continual::collect_fisher_samples(env, state_.policy, fc.replay_samples, fc.buffer_episodes, rng);
    const nn::Vector raw = continual::compute_fisher_diag(state_.policy, replay, fc.replay_batch);
    const nn::Vector fisher = continual::normalize_fisher(raw);
    const double mx = raw.size() > 0 ? raw.maxCoeff() : 0.0;
    if (mx == 0.0) spdlog::warn("run {}: zero Fisher after phase {}; penalty contribution is zero", id_.run_id, plan.phase_index);
    if (auto* e = std::get_if<continual::EwcState>(&state_.continual)) {
      continual::consolidate_offline(*e, state_.policy, fisher, trainer_.continual.lambda);
    } else if (auto* o = std::get_if<continual::OnlineEwcState>(&state_.continual)) {
      continual::consolidate_online(*o, state_.policy, fisher);
    }
    auto& rec = state_.log.phases.back();
    rec.consolidated = true;
    rec.fisher_samples = replay.size();
    rec.fisher_max = mx;
  }
  state_.phase_trained = false;
  ++state_.phases_completed;
}

void StrategyRun::run_to_completion() {
  while (!finished()) {
    if (!state_.phase_trained) train_current_phase();
    finish_current_phase();
  }
}

TrainingState run_strategy(const std::vector<PhasePlan>& schedule, const EnvSettings& env,
                           const TrainerSettings& trainer, const RunIdentity& id) {
  StrategyRun run(id, schedule, env, trainer);
  run.initialize();
  run.run_to_completion();
  return run.state();
}

}  // namespace cdrlab::strategy
