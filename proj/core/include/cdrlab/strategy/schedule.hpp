#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "cdrlab/randomization/randomization.hpp"

namespace cdrlab::strategy {

enum class StrategyKind { Ideal, Randomized, Finetuning, CdrEwc, CdrOnlineEwc };

inline constexpr std::array<StrategyKind, 5> kAllStrategies{StrategyKind::Ideal, StrategyKind::Randomized,
                                                            StrategyKind::Finetuning, StrategyKind::CdrEwc,
                                                            StrategyKind::CdrOnlineEwc};

std::string to_string(StrategyKind kind);
StrategyKind parse_strategy(const std::string& name);  // ConfigError on unknown names
bool is_sequential(StrategyKind kind);
bool is_continual(StrategyKind kind);

// Randomization parameters: torque (T), latency (L), noise (N).
enum class Param { Torque, Latency, Noise };

char to_char(Param p);

// A permutation of {T, L, N}.
class Ordering {
 public:
  Ordering() = default;
  explicit Ordering(std::array<Param, 3> order);

  static Ordering parse(const std::string& text);  // e.g. "TLN"; ConfigError unless a permutation
  static Ordering tln();
  static Ordering nlt();

  const std::array<Param, 3>& params() const { return order_; }
  std::string to_string() const;
  bool operator==(const Ordering&) const = default;

 private:
  std::array<Param, 3> order_{Param::Torque, Param::Latency, Param::Noise};
};

// Ranges used when a parameter is active.
struct RandomizationRanges {
  randomization::Range latency = randomization::kLatencyBounds;
  randomization::Range noise = randomization::kNoiseBounds;
  randomization::TorqueRanges torque{};

  randomization::RandomizationSet single(Param p) const;
  randomization::RandomizationSet all() const;
};

struct PhasePlan {
  int phase_index = 0;
  std::string label;  // "ideal", "full", or the parameter letter
  randomization::RandomizationSet randomization;
  long long timesteps = 0;
  bool consolidate_after = false;
};

bool same_structure(const PhasePlan& a, const PhasePlan& b);

// One phase per parameter in `order`, each with `budget` steps, indexed from `first_index`.
std::vector<PhasePlan> parameter_phases(std::span<const Param> order, long long budget, bool consolidate,
                                        int first_index, const RandomizationRanges& ranges);

// Ideal / Randomized: one phase of total_budget. Sequential strategies: an
// ideal pretrain phase of pretrain_budget followed by the three single-
// parameter phases in `ordering`, splitting the remainder equally. CDR
// variants consolidate after every phase, finetuning never.
std::vector<PhasePlan> build_schedule(StrategyKind kind, const Ordering& ordering, long long total_budget,
                                      long long pretrain_budget, const RandomizationRanges& ranges = {});

// From-scratch training on a single randomized parameter.
std::vector<PhasePlan> single_param_importance_preset(Param param, long long budget,
                                                      const RandomizationRanges& ranges = {});

long long total_timesteps(std::span<const PhasePlan> schedule);

}  // namespace cdrlab::strategy
