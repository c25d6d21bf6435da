#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cdrlab::experiment {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRunFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRefused = 3;

struct CommandOptions {
  std::string config_path;  // empty: built-in defaults
  std::vector<std::string> overrides;
  std::optional<int> seeds;
  std::optional<std::string> out;
  bool force = false;
  int workers = 1;
};

int cmd_train(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep_lambda(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_importance(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const std::string& out_dir, std::ostream& out, std::ostream& err);
// Re-evaluates a stored run (id under the output directory, or a run
// directory path) and prints evaluation CSV rows.
int cmd_eval(const CommandOptions& opts, const std::string& run, std::optional<int> episodes, std::ostream& out,
             std::ostream& err);

}  // namespace cdrlab::experiment
