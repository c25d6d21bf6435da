#include <iostream>
#include <optional>
#include <string>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "cdrlab/experiment/commands.hpp"
#include "cdrlab/experiment/config.hpp"

namespace ex = cdrlab::experiment;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  int seeds = 0;
  std::string out;
  bool force = false;
  int workers = 1;

  void attach(CLI::App* cmd, bool matrix) {
    cmd->add_option("--config", config, "JSON config file (defaults apply when omitted)")->check(CLI::ExistingFile);
    cmd->add_option("--set", sets, "Override a config field, e.g. --set ppo.clip_range=0.2");
    cmd->add_option("--out", out, "Output directory (overrides CDRLAB_OUT and output.dir)");
    if (!matrix) return;
    cmd->add_option("--seeds", seeds, "Number of seeds (overrides matrix.seeds)")->check(CLI::PositiveNumber);
    cmd->add_flag("--force", force, "Retrain runs that already exist");
    cmd->add_option("--workers", workers, "Parallel runs")->check(CLI::PositiveNumber);
  }

  ex::CommandOptions options() const {
    ex::CommandOptions o;
    o.config_path = config;
    o.overrides = sets;
    if (seeds > 0) o.seeds = seeds;
    if (!out.empty()) o.out = out;
    o.force = force;
    o.workers = workers;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual domain randomization experiments on a simulated reacher"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");

  Common train_opts, sweep_opts, imp_opts, eval_opts;
  auto* train = app.add_subcommand("train", "Run the strategy x ordering x seed matrix");
  train_opts.attach(train, true);
  auto* sweep = app.add_subcommand("sweep-lambda", "Sweep the regularization constant for both CDR variants");
  sweep_opts.attach(sweep, true);
  auto* imp = app.add_subcommand("importance", "Train single-parameter models and the Ideal/Randomized baselines");
  imp_opts.attach(imp, true);

  auto* report = app.add_subcommand("report", "Summarize runs into tables and SVG charts");
  std::string report_dir;
  report->add_option("dir", report_dir, "Output directory holding runs/")->required();

  auto* eval = app.add_subcommand("eval", "Re-evaluate a stored run on the ideal and proxy-real environments");
  eval_opts.attach(eval, false);
  std::string eval_run;
  int episodes = 0;
  eval->add_option("run", eval_run, "Run id under the output directory, or a run directory")->required();
  eval->add_option("--episodes", episodes, "Episodes per environment")->check(CLI::PositiveNumber);

  auto* dump = app.add_subcommand("config", "Print the effective configuration as JSON");
  Common dump_opts;
  dump_opts.attach(dump, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);

  if (*train) return ex::cmd_train(train_opts.options(), std::cout, std::cerr);
  if (*sweep) return ex::cmd_sweep_lambda(sweep_opts.options(), std::cout, std::cerr);
  if (*imp) return ex::cmd_importance(imp_opts.options(), std::cout, std::cerr);
  if (*report) return ex::cmd_report(report_dir, std::cout, std::cerr);
  if (*eval) {
    return ex::cmd_eval(eval_opts.options(), eval_run, episodes > 0 ? std::optional<int>(episodes) : std::nullopt,
                        std::cout, std::cerr);
  }
  try {
    std::cout << ex::dump_config(ex::load_config(dump_opts.config, dump_opts.sets)) << "\n";
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return ex::kExitConfig;
  }
  return ex::kExitOk;
}
