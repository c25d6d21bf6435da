#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdrlab/experiment/config.hpp"
#include "cdrlab/strategy/trainer.hpp"

namespace cdrlab::experiment {

inline constexpr const char* kVersion = "0.1.0";

// One training run of a matrix.
struct RunSpec {
  std::string run_id;
  std::string family;  // strategy name, or T/L/N for importance runs
  strategy::StrategyKind kind = strategy::StrategyKind::Ideal;
  std::string ordering = "-";
  std::uint64_t seed = 0;
  std::optional<double> lambda;  // set for sweep runs
  std::vector<strategy::PhasePlan> schedule;
};

std::vector<RunSpec> train_matrix(const ExperimentConfig& cfg);
// CdrEwc and CdrOnlineEwc over lambda_grid x orderings x seeds.
std::vector<RunSpec> sweep_matrix(const ExperimentConfig& cfg);
// From-scratch T, L and N families plus Ideal and Randomized baselines.
std::vector<RunSpec> importance_matrix(const ExperimentConfig& cfg);

// Config with the run's lambda applied.
ExperimentConfig effective_config(const ExperimentConfig& cfg, const RunSpec& run);
// Hash of everything that determines a run's outputs: the effective config
// without the matrix-selection fields, plus the run identity.
std::string run_hash(const ExperimentConfig& cfg, const RunSpec& run);

enum class RunStatus { Completed, Resumed, Skipped, Refused, Failed };
const char* to_string(RunStatus s);

struct RunOutcome {
  std::string run_id;
  RunStatus status = RunStatus::Failed;
  std::string message;
};

struct ExecuteOptions {
  std::filesystem::path out_dir;
  bool force = false;
  int workers = 1;
  // Share the ideal pretrain phase between sequential runs with the same seed.
  bool reuse_pretrain = true;
  // Called after each finished phase; used for progress output and to
  // simulate interruptions in tests (throwing aborts the run).
  std::function<void(const RunSpec&, int phases_completed)> on_phase;
};

// Runs every spec, resuming incomplete runs from their last phase boundary.
// A completed run whose stored hash matches is Skipped; a run directory with
// a different hash is Refused. `force` retrains both from scratch.
std::vector<RunOutcome> execute(const ExperimentConfig& cfg, const std::vector<RunSpec>& runs,
                                const ExecuteOptions& opts);

std::filesystem::path runs_root(const std::filesystem::path& out_dir);
std::filesystem::path run_dir(const std::filesystem::path& out_dir, const std::string& run_id);

// Output directory resolution: --out, then CDRLAB_OUT, then the config.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag, const ExperimentConfig& cfg);

struct StoredRun {
  std::string run_id;
  std::string family;
  std::string strategy;
  std::string ordering;
  std::uint64_t seed = 0;
  std::optional<double> lambda;
  std::string hash;
  bool complete = false;
  std::vector<strategy::PhaseRecord> phases;
};

StoredRun read_manifest(const std::filesystem::path& dir);  // FormatError when malformed

// Loads the final snapshot of a completed run.
strategy::TrainingState load_run_state(const std::filesystem::path& dir);

// Writes the per-lambda sweep table (one row per run) and its per-lambda
// aggregate. Returns the number of run rows.
std::size_t write_sweep_tables(const std::filesystem::path& out_dir, const std::vector<RunSpec>& runs);
// Writes the importance comparison table (evalkit summary schema, grouped by family).
std::size_t write_importance_table(const std::filesystem::path& out_dir, const std::vector<RunSpec>& runs);

// Final-evaluation records (last timestep of the eval log) for one run.
std::vector<eval::EvalRecord> final_records(const std::vector<eval::EvalRecord>& eval_log);

}  // namespace cdrlab::experiment
