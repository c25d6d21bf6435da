#include "cdrlab/experiment/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "cdrlab/errors.hpp"
#include "cdrlab/io/csv.hpp"
#include "cdrlab/io/snapshot.hpp"
#include "json.hpp"

namespace cdrlab::experiment {

namespace fs = std::filesystem;
using nlohmann::json;
using strategy::StrategyKind;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kPhases = "phases.json";
constexpr const char* kTrainLog = "train_log.csv";
constexpr const char* kEvalLog = "eval.csv";
constexpr const char* kState = "state.snap";

// 5000 -> "5e3"; values off the x*10^y grid fall back to the shortest decimal.
std::string lambda_tag(double v) {
  if (v > 0.0) {
    const int y = static_cast<int>(std::floor(std::log10(v) + 1e-12));
    const double x = v / std::pow(10.0, y);
    if (std::abs(x - std::round(x)) < 1e-9) {
      return std::to_string(static_cast<long long>(std::round(x))) + "e" + std::to_string(y);
    }
  }
  return io::format_double(v);
}

std::string sequential_id(StrategyKind kind, const std::string& ord, std::uint64_t seed) {
  return strategy::to_string(kind) + "-" + ord + "-s" + std::to_string(seed);
}

std::string single_id(StrategyKind kind, std::uint64_t seed) {
  return strategy::to_string(kind) + "-s" + std::to_string(seed);
}

RunSpec single_run(const ExperimentConfig& cfg, StrategyKind kind, std::uint64_t seed) {
  RunSpec r;
  r.run_id = single_id(kind, seed);
  r.family = strategy::to_string(kind);
  r.kind = kind;
  r.seed = seed;
  r.schedule = strategy::build_schedule(kind, {}, cfg.matrix.total_budget, cfg.matrix.pretrain_budget, cfg.ranges);
  return r;
}

RunSpec sequential_run(const ExperimentConfig& cfg, StrategyKind kind, const std::string& ord, std::uint64_t seed) {
  const auto ordering = strategy::Ordering::parse(ord);
  RunSpec r;
  r.run_id = sequential_id(kind, ordering.to_string(), seed);
  r.family = strategy::to_string(kind);
  r.kind = kind;
  r.ordering = ordering.to_string();
  r.seed = seed;
  r.schedule = strategy::build_schedule(kind, ordering, cfg.matrix.total_budget, cfg.matrix.pretrain_budget, cfg.ranges);
  return r;
}

json phase_json(const strategy::PhaseRecord& p) {
  return json{{"phase", p.phase_index},
              {"label", p.label},
              {"start_timestep", p.start_timestep},
              {"end_timestep", p.end_timestep},
              {"draws",
               {{"episodes", p.draws.episodes},
                {"latency", p.draws.latency},
                {"noise", p.draws.noise},
                {"torque", p.draws.torque}}},
              {"consolidated", p.consolidated},
              {"fisher_samples", p.fisher_samples},
              {"fisher_max", p.fisher_max}};
}

strategy::PhaseRecord phase_from_json(const json& j) {
  strategy::PhaseRecord p;
  p.phase_index = j.at("phase").get<int>();
  p.label = j.at("label").get<std::string>();
  p.start_timestep = j.at("start_timestep").get<long long>();
  p.end_timestep = j.at("end_timestep").get<long long>();
  const auto& d = j.at("draws");
  p.draws.episodes = d.at("episodes").get<std::int64_t>();
  p.draws.latency = d.at("latency").get<std::int64_t>();
  p.draws.noise = d.at("noise").get<std::int64_t>();
  p.draws.torque = d.at("torque").get<std::int64_t>();
  p.consolidated = j.at("consolidated").get<bool>();
  p.fisher_samples = j.at("fisher_samples").get<std::size_t>();
  p.fisher_max = j.at("fisher_max").get<double>();
  return p;
}

std::string phases_text(const std::vector<strategy::PhaseRecord>& phases) {
  json arr = json::array();
  for (const auto& p : phases) arr.push_back(phase_json(p));
  return arr.dump(2) + "\n";
}

std::vector<strategy::PhaseRecord> parse_phases(const std::string& text) {
  const json arr = json::parse(text, nullptr, false);
  if (arr.is_discarded() || !arr.is_array()) throw FormatError("phases.json: not a JSON array");
  std::vector<strategy::PhaseRecord> out;
  try {
    for (const auto& j : arr) out.push_back(phase_from_json(j));
  } catch (const json::exception& e) {
    throw FormatError(std::string("phases.json: ") + e.what());
  }
  return out;
}

io::Snapshot to_snapshot(const strategy::TrainingState& s) {
  io::Snapshot snap;
  snap.meta = {s.timestep, s.phases_completed, s.phase_trained, s.next_eval_mark};
  snap.policy = s.policy;
  snap.critic = s.critic;
  snap.continual = s.continual;
  return snap;
}

strategy::TrainingState from_snapshot(io::Snapshot snap) {
  if (!snap.critic) throw FormatError("snapshot has no critic section");
  strategy::TrainingState s;
  s.policy = std::move(snap.policy);
  s.critic = std::move(*snap.critic);
  s.continual = std::move(snap.continual);
  s.timestep = snap.meta.timestep;
  s.phases_completed = snap.meta.phases_completed;
  s.phase_trained = snap.meta.phase_trained;
  s.next_eval_mark = snap.meta.next_eval_mark;
  return s;
}

// Logs and phase records first, snapshot last: a snapshot on disk always has
// logs at least as recent, and loading trims them back to the snapshot.
void save_state(const fs::path& dir, const strategy::TrainingState& s) {
  io::write_file_atomic(dir / kTrainLog, io::train_csv(s.log.train));
  io::write_file_atomic(dir / kEvalLog, io::eval_csv(s.log.eval));
  io::write_file_atomic(dir / kPhases, phases_text(s.log.phases));
  io::write_snapshot(dir / kState, to_snapshot(s));
}

strategy::TrainingState load_state(const fs::path& dir) {
  strategy::TrainingState s = from_snapshot(io::read_snapshot(dir / kState));
  auto train = io::parse_train_csv(io::read_file(dir / kTrainLog));
  auto ev = io::parse_eval_csv(io::read_file(dir / kEvalLog));
  auto phases = parse_phases(io::read_file(dir / kPhases));
  std::erase_if(train, [&](const auto& r) { return r.timestep > s.timestep; });
  std::erase_if(ev, [&](const auto& r) { return r.timestep > s.timestep; });
  const std::size_t keep = static_cast<std::size_t>(s.phases_completed + (s.phase_trained ? 1 : 0));
  if (phases.size() < keep) throw FormatError(dir.string() + ": phase records behind snapshot");
  phases.resize(keep);
  s.log = {std::move(train), std::move(ev), std::move(phases)};
  return s;
}

json schedule_json(const std::vector<strategy::PhasePlan>& schedule) {
  json arr = json::array();
  for (const auto& p : schedule) {
    arr.push_back({{"phase", p.phase_index},
                   {"label", p.label},
                   {"timesteps", p.timesteps},
                   {"consolidate_after", p.consolidate_after}});
  }
  return arr;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg, const RunSpec& run, const std::string& hash,
                    int phases_completed, bool complete) {
  const ExperimentConfig eff = effective_config(cfg, run);
  json seeds = json::array();
  for (auto s : cfg.matrix.seed_list()) seeds.push_back(s);
  json m{{"run_id", run.run_id},
         {"family", run.family},
         {"strategy", strategy::to_string(run.kind)},
         {"ordering", run.ordering},
         {"seed", run.seed},
         {"lambda", run.lambda ? json(*run.lambda) : json(nullptr)},
         {"run_hash", hash},
         {"config_hash", hash_hex(config_hash(cfg))},
         {"matrix_seeds", seeds},
         {"versions", {{"cdrlab", kVersion}, {"snapshot_format", io::kSnapshotVersion}}},
         {"schedule", schedule_json(run.schedule)},
         {"phases_completed", phases_completed},
         {"complete", complete},
         {"config", json::parse(dump_config(eff))}};
  io::write_file_atomic(dir / kManifest, m.dump(2) + "\n");
}

// Rewrites identity columns of logs produced under another run id.
void relabel(strategy::RunLog& log, const RunSpec& run) {
  for (auto& r : log.train) r.run_id = run.run_id;
  for (auto& r : log.eval) {
    r.run_id = run.run_id;
    r.strategy = strategy::to_string(run.kind);
    r.ordering = run.ordering;
  }
}

// Phase 0 of every sequential schedule is the same ideal pretrain, and its
// training does not depend on the strategy (no anchors exist yet), so it is
// computed once per seed and copied into each run.
class PretrainCache {
 public:
  PretrainCache(const ExperimentConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {}

  strategy::TrainingState get(const RunSpec& run) {
    const std::string key = key_for(run);
    std::shared_future<strategy::TrainingState> fut;
    std::promise<strategy::TrainingState> promise;
    bool owner = false;
    {
      std::lock_guard lock(mu_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        fut = promise.get_future().share();
        entries_.emplace(key, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(load_or_train(run, key));
      } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(mu_);
        entries_.erase(key);
      }
    }
    return fut.get();
  }

 private:
  std::string key_for(const RunSpec& run) const {
    RunSpec probe = run;
    probe.run_id = "pretrain";
    probe.kind = StrategyKind::Finetuning;
    probe.ordering = "-";
    probe.lambda.reset();
    probe.family = "pretrain";
    // Only phase 0 and the total budget (which sets the eval cadence) matter.
    const long long total = strategy::total_timesteps(run.schedule);
    strategy::PhasePlan head = run.schedule.front();
    head.consolidate_after = false;
    probe.schedule = {head, {1, "rest", {}, total - head.timesteps, false}};
    return run_hash(cfg_, probe) + "-s" + std::to_string(run.seed);
  }

  strategy::TrainingState load_or_train(const RunSpec& run, const std::string& key) {
    const fs::path dir = dir_ / ("pretrain-" + key);
    if (fs::exists(dir / kState)) {
      try {
        auto s = load_state(dir);
        if (s.phase_trained && s.phases_completed == 0) return s;
      } catch (const std::exception& e) {
        spdlog::warn("ignoring unreadable pretrain cache {}: {}", dir.string(), e.what());
      }
    }
    strategy::RunIdentity id{"pretrain", StrategyKind::Finetuning, "-", run.seed};
    auto schedule = run.schedule;
    for (auto& p : schedule) p.consolidate_after = false;
    strategy::StrategyRun sr(id, schedule, cfg_.env, effective_config(cfg_, run).trainer());
    sr.initialize();
    sr.train_current_phase();
    fs::create_directories(dir);
    save_state(dir, sr.state());
    return sr.state();
  }

  const ExperimentConfig& cfg_;
  fs::path dir_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<strategy::TrainingState>> entries_;
};

RunOutcome execute_one(const ExperimentConfig& cfg, const RunSpec& run, const ExecuteOptions& opts,
                       PretrainCache* cache) {
  const fs::path dir = run_dir(opts.out_dir, run.run_id);
  const std::string hash = run_hash(cfg, run);
  std::optional<strategy::TrainingState> resume;

  if (fs::exists(dir / kManifest)) {
    StoredRun stored;
    try {
      stored = read_manifest(dir);
    } catch (const std::exception& e) {
      if (!opts.force) return {run.run_id, RunStatus::Refused, std::string("unreadable manifest: ") + e.what()};
    }
    if (!opts.force) {
      if (stored.hash != hash) {
        return {run.run_id, RunStatus::Refused,
                "existing run has config hash " + stored.hash + ", requested " + hash + "; use --force to overwrite"};
      }
      if (stored.complete) {
        return {run.run_id, RunStatus::Skipped,
                "already complete with identical config hash " + hash + "; use --force to retrain"};
      }
      if (fs::exists(dir / kState)) {
        try {
          resume = load_state(dir);
        } catch (const std::exception& e) {
          spdlog::warn("run {}: cannot resume ({}); restarting", run.run_id, e.what());
        }
      }
    }
  }
  if (!resume) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_manifest(dir, cfg, run, hash, 0, false);
  }

  const ExperimentConfig eff = effective_config(cfg, run);
  strategy::RunIdentity id{run.run_id, run.kind, run.ordering, run.seed};
  strategy::StrategyRun sr(id, run.schedule, cfg.env, eff.trainer());
  const bool resumed = resume.has_value();
  if (resume) {
    sr.restore(std::move(*resume));
  } else if (cache && strategy::is_sequential(run.kind) && run.schedule.size() > 1) {
    strategy::TrainingState s = cache->get(run);
    relabel(s.log, run);
    s.continual = strategy::initial_continual_state(run.kind, eff.trainer().continual);
    sr.restore(std::move(s));
  } else {
    sr.initialize();
  }

  while (!sr.finished()) {
    if (!sr.state().phase_trained) sr.train_current_phase();
    sr.finish_current_phase();
    save_state(dir, sr.state());
    write_manifest(dir, cfg, run, hash, sr.state().phases_completed, sr.finished());
    if (opts.on_phase) opts.on_phase(run, sr.state().phases_completed);
  }
  return {run.run_id, resumed ? RunStatus::Resumed : RunStatus::Completed, ""};
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<RunSpec> train_matrix(const ExperimentConfig& cfg) {
  std::vector<RunSpec> out;
  for (auto kind : cfg.matrix.strategies) {
    for (auto seed : cfg.matrix.seed_list()) {
      if (!strategy::is_sequential(kind)) {
        out.push_back(single_run(cfg, kind, seed));
        continue;
      }
      for (const auto& ord : cfg.matrix.orderings) out.push_back(sequential_run(cfg, kind, ord, seed));
    }
  }
  return out;
}

std::vector<RunSpec> sweep_matrix(const ExperimentConfig& cfg) {
  std::vector<RunSpec> out;
  for (double lambda : cfg.matrix.lambda_grid) {
    for (auto kind : {StrategyKind::CdrEwc, StrategyKind::CdrOnlineEwc}) {
      for (const auto& ord : cfg.matrix.orderings) {
        for (auto seed : cfg.matrix.seed_list()) {
          RunSpec r = sequential_run(cfg, kind, ord, seed);
          r.lambda = lambda;
          // The default-lambda runs coincide with the main matrix.
          if (lambda != cfg.continual.lambda) {
            r.run_id = strategy::to_string(kind) + "-" + r.ordering + "-lam" + lambda_tag(lambda) + "-s" +
                       std::to_string(seed);
          }
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

std::vector<RunSpec> importance_matrix(const ExperimentConfig& cfg) {
  std::vector<RunSpec> out;
  for (auto p : {strategy::Param::Torque, strategy::Param::Latency, strategy::Param::Noise}) {
    for (auto seed : cfg.matrix.seed_list()) {
      RunSpec r;
      const std::string letter(1, strategy::to_char(p));
      r.run_id = "importance-" + letter + "-s" + std::to_string(seed);
      r.family = letter;
      r.kind = StrategyKind::Randomized;
      r.ordering = letter;
      r.seed = seed;
      r.schedule = strategy::single_param_importance_preset(p, cfg.matrix.total_budget, cfg.ranges);
      out.push_back(std::move(r));
    }
  }
  for (auto kind : {StrategyKind::Ideal, StrategyKind::Randomized}) {
    for (auto seed : cfg.matrix.seed_list()) out.push_back(single_run(cfg, kind, seed));
  }
  return out;
}

ExperimentConfig effective_config(const ExperimentConfig& cfg, const RunSpec& run) {
  ExperimentConfig eff = cfg;
  if (run.lambda) eff.continual.lambda = *run.lambda;
  return eff;
}

std::string run_hash(const ExperimentConfig& cfg, const RunSpec& run) {
  ExperimentConfig eff = effective_config(cfg, run);
  const MatrixConfig defaults;
  eff.matrix.strategies = defaults.strategies;
  eff.matrix.orderings = defaults.orderings;
  eff.matrix.seeds = defaults.seeds;
  eff.matrix.seed_base = defaults.seed_base;
  eff.matrix.lambda_grid = defaults.lambda_grid;
  eff.output.dir = OutputConfig{}.dir;
  const std::string identity = run.run_id + "|" + strategy::to_string(run.kind) + "|" + run.ordering + "|" +
                               std::to_string(run.seed) + "|" + schedule_json(run.schedule).dump();
  std::uint64_t h = config_hash(eff);
  for (unsigned char ch : identity) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return hash_hex(h);
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed:
      return "completed";
    case RunStatus::Resumed:
      return "resumed";
    case RunStatus::Skipped:
      return "skipped";
    case RunStatus::Refused:
      return "refused";
    case RunStatus::Failed:
      return "failed";
  }
  return "?";
}

fs::path runs_root(const fs::path& out_dir) { return out_dir / "runs"; }
fs::path run_dir(const fs::path& out_dir, const std::string& run_id) { return runs_root(out_dir) / run_id; }

fs::path resolve_out_dir(const std::optional<std::string>& flag, const ExperimentConfig& cfg) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("CDRLAB_OUT"); env && *env) return env;
  return cfg.output.dir;
}

std::vector<RunOutcome> execute(const ExperimentConfig& cfg, const std::vector<RunSpec>& runs,
                                const ExecuteOptions& opts) {
  validate(cfg);
  std::vector<RunOutcome> outcomes(runs.size());
  PretrainCache cache(cfg, opts.out_dir / "cache");
  PretrainCache* cache_ptr = opts.reuse_pretrain ? &cache : nullptr;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        outcomes[i] = execute_one(cfg, runs[i], opts, cache_ptr);
      } catch (const std::exception& e) {
        outcomes[i] = {runs[i].run_id, RunStatus::Failed, e.what()};
      }
    }
  };
  const int n = std::clamp(opts.workers, 1, static_cast<int>(std::max<std::size_t>(1, runs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  return outcomes;
}

StoredRun read_manifest(const fs::path& dir) {
  const json m = json::parse(io::read_file(dir / kManifest), nullptr, false);
  if (m.is_discarded() || !m.is_object()) throw FormatError((dir / kManifest).string() + ": not a JSON object");
  StoredRun s;
  try {
    s.run_id = m.at("run_id").get<std::string>();
    s.family = m.at("family").get<std::string>();
    s.strategy = m.at("strategy").get<std::string>();
    s.ordering = m.at("ordering").get<std::string>();
    s.seed = m.at("seed").get<std::uint64_t>();
    if (!m.at("lambda").is_null()) {
      s.lambda = m.at("lambda").get<double>();
    } else if (strategy::is_continual(strategy::parse_strategy(s.strategy))) {
      s.lambda = m.at("config").at("ewc").at("lambda").get<double>();
    }
    s.hash = m.at("run_hash").get<std::string>();
    s.complete = m.at("complete").get<bool>();
  } catch (const json::exception& e) {
    throw FormatError((dir / kManifest).string() + ": " + e.what());
  }
  if (fs::exists(dir / kPhases)) s.phases = parse_phases(io::read_file(dir / kPhases));
  return s;
}

strategy::TrainingState load_run_state(const fs::path& dir) { return load_state(dir); }

std::vector<eval::EvalRecord> final_records(const std::vector<eval::EvalRecord>& eval_log) {
  if (eval_log.empty()) return {};
  long long last = 0;
  for (const auto& r : eval_log) last = std::max(last, r.timestep);
  std::vector<eval::EvalRecord> out;
  for (const auto& r : eval_log) {
    if (r.timestep == last) out.push_back(r);
  }
  return out;
}

std::size_t write_sweep_tables(const fs::path& out_dir, const std::vector<RunSpec>& runs) {
  struct Row {
    double lambda;
    std::string strategy, ordering, run_id;
    std::uint64_t seed;
    double m[2][3];  // [env][r_ep, continuity, d_tgt]
  };
  std::vector<Row> rows;
  for (const auto& run : runs) {
    const fs::path dir = run_dir(out_dir, run.run_id);
    std::vector<eval::EvalRecord> recs;
    try {
      recs = final_records(io::parse_eval_csv(io::read_file(dir / kEvalLog)));
    } catch (const std::exception& e) {
      spdlog::warn("sweep: skipping {}: {}", run.run_id, e.what());
      continue;
    }
    Row row{run.lambda.value_or(0.0), strategy::to_string(run.kind), run.ordering, run.run_id, run.seed, {}};
    for (int env = 0; env < 2; ++env) {
      std::vector<double> v[3];
      for (const auto& r : recs) {
        if (static_cast<int>(r.eval_env) != env) continue;
        v[0].push_back(r.r_ep);
        v[1].push_back(r.continuity);
        v[2].push_back(r.d_tgt);
      }
      for (int k = 0; k < 3; ++k) row.m[env][k] = mean_of(v[k]);
    }
    rows.push_back(row);
  }

  std::string runs_csv =
      "lambda,strategy,ordering,seed,run_id,ideal_r_ep,ideal_continuity,ideal_d_tgt,proxy_real_r_ep,"
      "proxy_real_continuity,proxy_real_d_tgt\n";
  for (const auto& r : rows) {
    runs_csv += io::format_double(r.lambda) + "," + r.strategy + "," + r.ordering + "," + std::to_string(r.seed) +
                "," + r.run_id;
    for (int env = 0; env < 2; ++env) {
      for (int k = 0; k < 3; ++k) runs_csv += "," + io::format_double(r.m[env][k]);
    }
    runs_csv += "\n";
  }

  // Per lambda: each strategy, and both pooled ("all").
  std::map<std::pair<double, std::string>, std::vector<const Row*>> groups;
  for (const auto& r : rows) {
    groups[{r.lambda, r.strategy}].push_back(&r);
    groups[{r.lambda, "all"}].push_back(&r);
  }
  std::string summary =
      "lambda,strategy,runs,proxy_real_r_ep_median,proxy_real_r_ep_mean,proxy_real_r_ep_std,ideal_r_ep_median,"
      "proxy_real_d_tgt_median,proxy_real_continuity_median\n";
  for (const auto& [key, members] : groups) {
    std::vector<double> pr, ir, pd, pc;
    for (const Row* r : members) {
      pr.push_back(r->m[1][0]);
      ir.push_back(r->m[0][0]);
      pd.push_back(r->m[1][2]);
      pc.push_back(r->m[1][1]);
    }
    const auto spr = eval::summarize(pr);
    summary += io::format_double(key.first) + "," + key.second + "," + std::to_string(members.size()) + "," +
               io::format_double(spr.median) + "," + io::format_double(spr.mean) + "," + io::format_double(spr.std) +
               "," + io::format_double(eval::summarize(ir).median) + "," +
               io::format_double(eval::summarize(pd).median) + "," + io::format_double(eval::summarize(pc).median) +
               "\n";
  }
  const fs::path dir = out_dir / "sweep";
  fs::create_directories(dir);
  io::write_file_atomic(dir / "sweep_runs.csv", runs_csv);
  io::write_file_atomic(dir / "sweep_summary.csv", summary);
  return rows.size();
}

std::size_t write_importance_table(const fs::path& out_dir, const std::vector<RunSpec>& runs) {
  std::vector<eval::EvalRecord> all;
  for (const auto& run : runs) {
    try {
      auto recs = final_records(io::parse_eval_csv(io::read_file(run_dir(out_dir, run.run_id) / kEvalLog)));
      for (auto& r : recs) {
        r.strategy = run.family;
        r.ordering = "-";
      }
      all.insert(all.end(), recs.begin(), recs.end());
    } catch (const std::exception& e) {
      spdlog::warn("importance: skipping {}: {}", run.run_id, e.what());
    }
  }
  const auto rows = eval::aggregate(all);
  const fs::path dir = out_dir / "importance";
  fs::create_directories(dir);
  io::write_file_atomic(dir / "importance_summary.csv", io::summary_csv(rows));
  io::write_file_atomic(dir / "importance_summary.txt", io::summary_table(rows));
  return rows.size();
}

}  // namespace cdrlab::experiment
