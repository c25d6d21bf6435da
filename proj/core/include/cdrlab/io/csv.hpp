#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdrlab/eval/evalkit.hpp"
#include "cdrlab/strategy/trainer.hpp"

namespace cdrlab::io {

// Shortest representation that parses back to the same double; "nan" for NaN.
std::string format_double(double v);
double parse_double(std::string_view s);

// Splits comma-separated lines; no quoting (fields never contain commas).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

inline constexpr std::string_view kEvalCsvHeader =
    "run_id,strategy,ordering,seed,phase,timestep,eval_env,episode,r_ep,continuity,d_tgt";
inline constexpr std::string_view kTrainCsvHeader =
    "run_id,phase,timestep,mean_ep_reward,actor_loss,critic_loss,penalty,entropy";
inline constexpr std::string_view kSummaryCsvHeader =
    "strategy,ordering,eval_env,count,r_ep_mean,r_ep_std,r_ep_median,continuity_mean,continuity_std,"
    "continuity_median,d_tgt_mean,d_tgt_std,d_tgt_median";

std::string eval_csv(std::span<const eval::EvalRecord> records);
std::vector<eval::EvalRecord> parse_eval_csv(std::string_view text);  // FormatError on bad rows

std::string train_csv(std::span<const strategy::TrainLogRow> rows);
std::vector<strategy::TrainLogRow> parse_train_csv(std::string_view text);

std::string summary_csv(std::span<const eval::SummaryRow> rows);
// Aligned plain-text rendering of the summary (mean +- std per metric).
std::string summary_table(std::span<const eval::SummaryRow> rows);

}  // namespace cdrlab::io
