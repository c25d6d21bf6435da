#include "cdrlab/experiment/commands.hpp"

#include <filesystem>

#include <spdlog/spdlog.h>

#include "cdrlab/errors.hpp"
#include "cdrlab/experiment/config.hpp"
#include "cdrlab/experiment/experiment.hpp"
#include "cdrlab/io/csv.hpp"
#include "cdrlab/io/snapshot.hpp"
#include "cdrlab/report/report.hpp"
#include "cdrlab/seeding.hpp"

namespace cdrlab::experiment {

namespace fs = std::filesystem;

namespace {

ExperimentConfig load(const CommandOptions& opts) {
  std::vector<std::string> overrides = opts.overrides;
  if (opts.seeds) overrides.push_back("matrix.seeds=" + std::to_string(*opts.seeds));
  return load_config(opts.config_path, overrides);
}

// Runs the matrix and maps outcomes to an exit code.
int run_matrix(const ExperimentConfig& cfg, const std::vector<RunSpec>& runs, const CommandOptions& opts,
               const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  fs::create_directories(out_dir);
  ExecuteOptions eo;
  eo.out_dir = out_dir;
  eo.force = opts.force;
  eo.workers = opts.workers;
  eo.on_phase = [](const RunSpec& run, int done) {
    spdlog::info("{}: phase {}/{} done", run.run_id, done, run.schedule.size());
  };
  const auto outcomes = execute(cfg, runs, eo);
  int failed = 0, refused = 0, skipped = 0;
  for (const auto& o : outcomes) {
    out << o.run_id << ": " << to_string(o.status) << (o.message.empty() ? "" : " (" + o.message + ")") << "\n";
    if (o.status == RunStatus::Failed) ++failed;
    if (o.status == RunStatus::Refused) ++refused;
    if (o.status == RunStatus::Skipped) ++skipped;
  }
  if (failed > 0) {
    err << failed << " run(s) failed\n";
    return kExitRunFailed;
  }
  if (refused > 0) {
    err << refused << " run(s) refused: output exists with a different configuration; use --force\n";
    return kExitRefused;
  }
  if (!outcomes.empty() && skipped == static_cast<int>(outcomes.size())) {
    err << "refusing to rerun: every run is already complete with an identical config hash; use --force\n";
    return kExitRefused;
  }
  return kExitOk;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRunFailed;
  }
}

}  // namespace

int cmd_train(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load(opts);
    const fs::path dir = resolve_out_dir(opts.out, cfg);
    return run_matrix(cfg, train_matrix(cfg), opts, dir, out, err);
  });
}

int cmd_sweep_lambda(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load(opts);
    const fs::path dir = resolve_out_dir(opts.out, cfg);
    const auto runs = sweep_matrix(cfg);
    const int code = run_matrix(cfg, runs, opts, dir, out, err);
    if (code == kExitRunFailed || code == kExitConfig) return code;
    const std::size_t rows = write_sweep_tables(dir, runs);
    out << "sweep: " << rows << " run rows written to " << (dir / "sweep").string() << "\n";
    return rows == runs.size() ? kExitOk : kExitRunFailed;
  });
}

int cmd_importance(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load(opts);
    const fs::path dir = resolve_out_dir(opts.out, cfg);
    const auto runs = importance_matrix(cfg);
    const int code = run_matrix(cfg, runs, opts, dir, out, err);
    if (code == kExitRunFailed || code == kExitConfig) return code;
    write_importance_table(dir, runs);
    out << io::read_file(dir / "importance" / "importance_summary.txt");
    return kExitOk;
  });
}

int cmd_report(const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto res = report::generate_report(out_dir);
    if (res.runs == 0) {
      out << "no runs\n";
    } else {
      out << io::read_file(res.report_dir / "summary.txt");
    }
    for (const auto& p : res.problems) err << "problem: " << p << "\n";
    out << "report written to " << res.report_dir.string() << "\n";
    return kExitOk;
  });
}

int cmd_eval(const CommandOptions& opts, const std::string& run, std::optional<int> episodes, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load(opts);
    fs::path dir = run;
    if (!fs::exists(dir / "manifest.json")) dir = run_dir(resolve_out_dir(opts.out, cfg), run);
    if (!fs::exists(dir / "manifest.json")) throw ConfigError("no run found at " + run);
    const StoredRun meta = read_manifest(dir);
    const auto state = load_run_state(dir);
    const int n = episodes.value_or(cfg.output.eval_episodes);
    if (n < 1) throw ConfigError("--episodes must be >= 1");
    std::vector<std::uint64_t> seeds;
    for (int e = 0; e < n; ++e) seeds.push_back(derive_seed(meta.seed, stream::kEval, static_cast<std::uint64_t>(e)));
    eval::RecordKey key{meta.run_id, meta.strategy, meta.ordering, meta.seed, state.phases_completed,
                        state.timestep, eval::EvalEnv::Ideal};
    auto ideal = cfg.env.make_ideal();
    auto recs = eval::evaluate(state.policy, ideal, seeds, key, cfg.d_tgt_squared);
    key.eval_env = eval::EvalEnv::ProxyReal;
    auto proxy = cfg.env.make_proxy_real();
    auto real = eval::evaluate(state.policy, proxy, seeds, key, cfg.d_tgt_squared);
    recs.insert(recs.end(), real.begin(), real.end());
    out << io::eval_csv(recs);
    err << io::summary_table(eval::aggregate(recs));
    return kExitOk;
  });
}

}  // namespace cdrlab::experiment
