#include "cdrlab/strategy/schedule.hpp"

#include <algorithm>

#include "cdrlab/errors.hpp"

namespace cdrlab::strategy {

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Ideal: return "ideal";
    case StrategyKind::Randomized: return "randomized";
    case StrategyKind::Finetuning: return "finetuning";
    case StrategyKind::CdrEwc: return "cdr-ewc";
    case StrategyKind::CdrOnlineEwc: return "cdr-online-ewc";
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& name) {
  for (StrategyKind k : kAllStrategies) {
    if (to_string(k) == name) return k;
  }
  throw_config("unknown strategy '" + name + "' (expected ideal, randomized, finetuning, cdr-ewc, cdr-online-ewc)");
}

bool is_sequential(StrategyKind kind) {
  return kind == StrategyKind::Finetuning || kind == StrategyKind::CdrEwc || kind == StrategyKind::CdrOnlineEwc;
}

bool is_continual(StrategyKind kind) { return kind == StrategyKind::CdrEwc || kind == StrategyKind::CdrOnlineEwc; }

char to_char(Param p) {
  switch (p) {
    case Param::Torque: return 'T';
    case Param::Latency: return 'L';
    case Param::Noise: return 'N';
  }
  return '?';
}

Ordering::Ordering(std::array<Param, 3> order) : order_(order) {
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<Param, 3>{Param::Torque, Param::Latency, Param::Noise}) {
    throw_config("ordering must contain T, L and N exactly once");
  }
}

Ordering Ordering::parse(const std::string& text) {
  if (text.size() != 3) throw_config("ordering '" + text + "' must be a permutation of TLN");
  std::array<Param, 3> order{};
  for (std::size_t i = 0; i < 3; ++i) {
    switch (text[i]) {
      case 'T': order[i] = Param::Torque; break;
      case 'L': order[i] = Param::Latency; break;
      case 'N': order[i] = Param::Noise; break;
      default: throw_config("ordering '" + text + "' must be a permutation of TLN");
    }
  }
  if (order[0] == order[1] || order[1] == order[2] || order[0] == order[2]) {
    throw_config("ordering '" + text + "' must be a permutation of TLN");
  }
  return Ordering(order);
}

Ordering Ordering::tln() { return Ordering({Param::Torque, Param::Latency, Param::Noise}); }
Ordering Ordering::nlt() { return Ordering({Param::Noise, Param::Latency, Param::Torque}); }

std::string Ordering::to_string() const {
  std::string s;
  for (Param p : order_) s.push_back(to_char(p));
  return s;
}

randomization::RandomizationSet RandomizationRanges::single(Param p) const {
  randomization::RandomizationSet s;
  switch (p) {
    case Param::Torque: s.torque = torque; break;
    case Param::Latency: s.latency = latency; break;
    case Param::Noise: s.noise = noise; break;
  }
  return s;
}

randomization::RandomizationSet RandomizationRanges::all() const {
  randomization::RandomizationSet s;
  s.latency = latency;
  s.noise = noise;
  s.torque = torque;
  return s;
}

bool same_structure(const PhasePlan& a, const PhasePlan& b) {
  auto same_set = [](const randomization::RandomizationSet& x, const randomization::RandomizationSet& y) {
    auto eq_range = [](const auto& r1, const auto& r2) {
      if (r1.has_value() != r2.has_value()) return false;
      return !r1 || (r1->lo == r2->lo && r1->hi == r2->hi);
    };
    if (x.torque.has_value() != y.torque.has_value()) return false;
    if (x.torque && (x.torque->stiffness.lo != y.torque->stiffness.lo || x.torque->stiffness.hi != y.torque->stiffness.hi ||
                     x.torque->damping.lo != y.torque->damping.lo || x.torque->damping.hi != y.torque->damping.hi)) {
      return false;
    }
    return eq_range(x.latency, y.latency) && eq_range(x.noise, y.noise);
  };
  return a.label == b.label && a.timesteps == b.timesteps && a.consolidate_after == b.consolidate_after &&
         same_set(a.randomization, b.randomization);
}

std::vector<PhasePlan> parameter_phases(std::span<const Param> order, long long budget, bool consolidate,
                                        int first_index, const RandomizationRanges& ranges) {
  std::vector<PhasePlan> out;
  int idx = first_index;
  for (Param p : order) {
    out.push_back({idx++, std::string(1, to_char(p)), ranges.single(p), budget, consolidate});
  }
  return out;
}

std::vector<PhasePlan> build_schedule(StrategyKind kind, const Ordering& ordering, long long total_budget,
                                      long long pretrain_budget, const RandomizationRanges& ranges) {
  if (total_budget < 0 || pretrain_budget < 0) throw_config("budgets must be >= 0");
  switch (kind) {
    case StrategyKind::Ideal:
      return {{0, "ideal", {}, total_budget, false}};
    case StrategyKind::Randomized:
      return {{0, "full", ranges.all(), total_budget, false}};
    default:
      break;
  }
  const long long rest = total_budget - pretrain_budget;
  if (rest < 0 || rest % 3 != 0) {
    throw_config("sequential schedules need total_budget - pretrain_budget to be a nonnegative multiple of 3 (got " +
                 std::to_string(total_budget) + " and " + std::to_string(pretrain_budget) + ")");
  }
  const bool consolidate = is_continual(kind);
  std::vector<PhasePlan> plan{{0, "ideal", {}, pretrain_budget, consolidate}};
  const auto tail = parameter_phases(ordering.params(), rest / 3, consolidate, 1, ranges);
  plan.insert(plan.end(), tail.begin(), tail.end());
  return plan;
}

std::vector<PhasePlan> single_param_importance_preset(Param param, long long budget,
                                                      const RandomizationRanges& ranges) {
  const std::array<Param, 1> one{param};
  return parameter_phases(one, budget, false, 0, ranges);
}

long long total_timesteps(std::span<const PhasePlan> schedule) {
  long long s = 0;
  for (const auto& p : schedule) s += p.timesteps;
  return s;
}

}  // namespace cdrlab::strategy
