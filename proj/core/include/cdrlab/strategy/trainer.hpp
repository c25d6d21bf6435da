#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cdrlab/continual/continual.hpp"
#include "cdrlab/eval/evalkit.hpp"
#include "cdrlab/ppo/ppo.hpp"
#include "cdrlab/randomization/randomization.hpp"
#include "cdrlab/strategy/schedule.hpp"

namespace cdrlab::strategy {

struct EnvSettings {
  env::ArmModel arm;
  env::EpisodeSpec episode;
  randomization::NoiseRanges noise_ranges;
  randomization::ProxyRealConfig proxy_real;

  randomization::RandomizedEnv make(const randomization::RandomizationSet& set) const;
  randomization::RandomizedEnv make_ideal() const { return make({}); }
  randomization::RandomizedEnv make_proxy_real() const;
};

struct ContinualSettings {
  double lambda = 5e3;
  double online_gamma = 0.95;
  bool online_gamma_in_penalty = true;
  continual::FisherConfig fisher;
};

struct EvalSettings {
  int episodes = 10;
  double every_fraction = 0.02;  // of the schedule's total budget; <= 0 evaluates at phase ends only
  bool d_tgt_squared = false;
};

struct TrainerSettings {
  ppo::PpoConfig ppo;
  std::vector<int> hidden{64, 64};
  ContinualSettings continual;
  EvalSettings eval;
};

struct RunIdentity {
  std::string run_id;
  StrategyKind kind = StrategyKind::Ideal;
  std::string ordering = "-";
  std::uint64_t seed = 0;
};

struct TrainLogRow {
  std::string run_id;
  int phase = 0;
  long long timestep = 0;
  double mean_ep_reward = 0.0;  // NaN when no episode finished in the rollout
  double actor_loss = 0.0;
  double critic_loss = 0.0;
  double penalty = 0.0;
  double entropy = 0.0;
};

struct PhaseRecord {
  int phase_index = 0;
  std::string label;
  long long start_timestep = 0;
  long long end_timestep = 0;
  randomization::DrawLog draws;
  bool consolidated = false;
  std::size_t fisher_samples = 0;
  double fisher_max = 0.0;  // before normalization
};

struct RunLog {
  std::vector<TrainLogRow> train;
  std::vector<eval::EvalRecord> eval;
  std::vector<PhaseRecord> phases;
};

// Everything needed to continue a run from a phase boundary.
struct TrainingState {
  nn::GaussianPolicy policy;
  nn::Critic critic;
  continual::ContinualState continual;
  long long timestep = 0;
  int phases_completed = 0;
  // Training of phase `phases_completed` is done but its boundary work
  // (consolidation) is still pending.
  bool phase_trained = false;
  long long next_eval_mark = 0;
  RunLog log;
};

// Executes a phase schedule: PPO training per phase on that phase's
// randomization, consolidation at flagged boundaries, periodic evaluation on
// the ideal and proxy-real environments. Each phase, its Fisher replay and
// every evaluation draw from RNG streams derived only from (seed, phase), so
// a run resumed at a boundary is identical to an uninterrupted one.
class StrategyRun {
 public:
  StrategyRun(RunIdentity id, std::vector<PhasePlan> schedule, EnvSettings env, TrainerSettings trainer);

  void initialize();
  void restore(TrainingState state);

  bool finished() const { return state_.phases_completed >= static_cast<int>(schedule_.size()); }
  const PhasePlan& current_phase() const;
  void train_current_phase();
  void finish_current_phase();
  void run_to_completion();

  const TrainingState& state() const { return state_; }
  TrainingState& state() { return state_; }
  const RunIdentity& identity() const { return id_; }
  const std::vector<PhasePlan>& schedule() const { return schedule_; }

  void set_progress_callback(std::function<void(const TrainLogRow&)> cb) { progress_ = std::move(cb); }

  std::vector<eval::EvalRecord> evaluate_snapshot(int phase) const;

 private:
  long long eval_interval() const;

  RunIdentity id_;
  std::vector<PhasePlan> schedule_;
  EnvSettings env_;
  TrainerSettings trainer_;
  TrainingState state_;
  std::function<void(const TrainLogRow&)> progress_;
};

continual::ContinualState initial_continual_state(StrategyKind kind, const ContinualSettings& settings);

TrainingState run_strategy(const std::vector<PhasePlan>& schedule, const EnvSettings& env,
                           const TrainerSettings& trainer, const RunIdentity& id);

}  // namespace cdrlab::strategy
