#include "cdrlab/eval/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "cdrlab/errors.hpp"
#include "cdrlab/ppo/rollout.hpp"

namespace cdrlab::eval {

const char* to_string(EvalEnv e) { return e == EvalEnv::Ideal ? "ideal" : "proxy_real"; }

EvalEnv parse_eval_env(const std::string& s) {
  if (s == "ideal") return EvalEnv::Ideal;
  if (s == "proxy_real") return EvalEnv::ProxyReal;
  throw FormatError("unknown eval_env '" + s + "'");
}

// Neumaier-compensated sum.
double episodic_reward(std::span<const double> rewards) {
  double sum = 0.0;
  double comp = 0.0;
  for (double r : rewards) {
    const double t = sum + r;
    comp += std::abs(sum) >= std::abs(r) ? (sum - t) + r : (r - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double continuity_cost(std::span<const env::Action> actions) {
  if (actions.size() < 2) throw_usage("continuity_cost: needs at least two actions");
  std::vector<double> sq(actions.size() - 1);
  double max_sq = 0.0;
  for (std::size_t t = 0; t + 1 < actions.size(); ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < env::kActionDim; ++i) {
      const double d = actions[t + 1][i] - actions[t][i];
      s += d * d;
    }
    sq[t] = s;
    max_sq = std::max(max_sq, s);
  }
  if (max_sq == 0.0) return 0.0;
  double acc = 0.0;
  for (double s : sq) acc += s / max_sq;
  return 100.0 * acc / static_cast<double>(sq.size());
}

double distance_to_target(std::span<const env::Vec3> positions, const env::Vec3& target, int horizon, bool squared) {
  if (horizon < 1) throw_usage("distance_to_target: horizon must be >= 1");
  if (positions.size() < static_cast<std::size_t>(horizon) + 1) {
    throw_usage("distance_to_target: positions must cover steps 0..T");
  }
  const auto first = static_cast<std::size_t>(horizon / 2);
  const auto last = static_cast<std::size_t>(horizon);
  double acc = 0.0;
  for (std::size_t t = first; t <= last; ++t) {
    const double d = env::distance(positions[t], target);
    acc += squared ? d * d : d;
  }
  return acc / static_cast<double>(last - first + 1);
}

EpisodeTrace run_episode(const nn::GaussianPolicy& policy, env::Environment& env, std::uint64_t seed) {
  EpisodeTrace tr;
  const int horizon = env.spec().horizon;
  tr.rewards.reserve(static_cast<std::size_t>(horizon));
  tr.actions.reserve(static_cast<std::size_t>(horizon));
  tr.positions.reserve(static_cast<std::size_t>(horizon) + 1);
  env::Observation obs = env.reset(seed);
  tr.target = env.target();
  tr.positions.push_back(env.end_effector());
  while (!env.episode_over()) {
    const nn::Vector mu = policy.mean.forward(ppo::to_vector(obs));
    env::Action a = ppo::to_action(mu);
    for (double& c : a) c = std::clamp(c, -1.0, 1.0);
    const env::StepResult r = env.step(a);
    tr.actions.push_back(a);
    tr.rewards.push_back(r.reward);
    tr.positions.push_back(r.ee_pos);
    tr.terminated = r.terminated;
    obs = r.obs;
  }
  while (tr.positions.size() < static_cast<std::size_t>(horizon) + 1) tr.positions.push_back(tr.positions.back());
  return tr;
}

EpisodeMetrics episode_metrics(const EpisodeTrace& trace, int horizon, bool d_tgt_squared) {
  EpisodeMetrics m;
  m.r_ep = episodic_reward(trace.rewards);
  m.continuity = trace.actions.size() >= 2 ? continuity_cost(trace.actions) : 0.0;
  m.d_tgt = distance_to_target(trace.positions, trace.target, horizon, d_tgt_squared);
  return m;
}

std::vector<EvalRecord> evaluate(const nn::GaussianPolicy& policy, env::Environment& env,
                                 std::span<const std::uint64_t> episode_seeds, const RecordKey& key,
                                 bool d_tgt_squared) {
  if (policy.obs_dim() != static_cast<int>(env::kObsDim) || policy.action_dim() != static_cast<int>(env::kActionDim)) {
    throw ConfigError("evaluate: policy dimensions do not match the environment");
  }
  if (episode_seeds.empty()) throw_usage("evaluate: need at least one episode");
  std::vector<EvalRecord> out;
  out.reserve(episode_seeds.size());
  for (std::size_t e = 0; e < episode_seeds.size(); ++e) {
    const EpisodeTrace tr = run_episode(policy, env, episode_seeds[e]);
    const EpisodeMetrics m = episode_metrics(tr, env.spec().horizon, d_tgt_squared);
    out.push_back({key.run_id, key.strategy, key.ordering, key.seed, key.phase, key.timestep, key.eval_env,
                   static_cast<int>(e), m.r_ep, m.continuity, m.d_tgt});
  }
  return out;
}

MetricSummary summarize(std::span<const double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / n);
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

std::vector<SummaryRow> aggregate(std::span<const EvalRecord> records) {
  using Key = std::tuple<std::string, std::string, int>;
  struct Cols {
    std::vector<double> r, c, d;
  };
  std::map<Key, Cols> groups;
  for (const auto& rec : records) {
    auto& g = groups[{rec.strategy, rec.ordering, static_cast<int>(rec.eval_env)}];
    g.r.push_back(rec.r_ep);
    g.c.push_back(rec.continuity);
    g.d.push_back(rec.d_tgt);
  }
  std::vector<SummaryRow> out;
  out.reserve(groups.size());
  for (const auto& [key, cols] : groups) {
    SummaryRow row;
    row.strategy = std::get<0>(key);
    row.ordering = std::get<1>(key);
    row.eval_env = static_cast<EvalEnv>(std::get<2>(key));
    row.count = cols.r.size();
    row.r_ep = summarize(cols.r);
    row.continuity = summarize(cols.c);
    row.d_tgt = summarize(cols.d);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace cdrlab::eval
