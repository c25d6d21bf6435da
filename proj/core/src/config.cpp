#include "cdrlab/experiment/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cdrlab/errors.hpp"
#include "json.hpp"

namespace cdrlab::experiment {

using nlohmann::json;

std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  double p = 1.0;
  for (int y = 0; y <= 4; ++y) {
    g.push_back(1.0 * p);
    g.push_back(5.0 * p);
    p *= 10.0;
  }
  return g;
}

std::vector<std::uint64_t> MatrixConfig::seed_list() const {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < seeds; ++i) s.push_back(seed_base + static_cast<std::uint64_t>(i));
  return s;
}

strategy::TrainerSettings ExperimentConfig::trainer() const {
  strategy::TrainerSettings t;
  t.ppo = ppo;
  t.hidden = hidden;
  t.continual = continual;
  t.eval.episodes = output.eval_episodes;
  t.eval.every_fraction = output.eval_every_fraction;
  t.eval.d_tgt_squared = d_tgt_squared;
  return t;
}

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

json range_json(const randomization::Range& r) { return json::array({r.lo, r.hi}); }

json to_json(const ExperimentConfig& c) {
  const auto& arm = c.env.arm;
  const auto& ep = c.env.episode;
  json strategies = json::array();
  for (auto k : c.matrix.strategies) strategies.push_back(strategy::to_string(k));
  return json{
      {"env",
       {{"arm",
         {{"link_lengths", {arm.link_lengths[0], arm.link_lengths[1]}},
          {"joint_limits",
           {{arm.joint_limits[0].lo, arm.joint_limits[0].hi}, {arm.joint_limits[1].lo, arm.joint_limits[1].hi}}},
          {"max_joint_speed_deg_s", arm.max_joint_speed / kRadPerDeg},
          {"base_height", arm.base_height},
          {"floor_z", arm.floor_z}}},
        {"episode",
         {{"horizon", ep.horizon},
          {"dt", ep.dt},
          {"target", {ep.target[0], ep.target[1], ep.target[2]}},
          {"start_q", {ep.start_q[0], ep.start_q[1]}},
          {"target_jitter", ep.target_jitter}}}}},
      {"randomization",
       {{"latency_s", range_json(c.ranges.latency)},
        {"noise_pct", range_json(c.ranges.noise)},
        {"stiffness", range_json(c.ranges.torque.stiffness)},
        {"damping", range_json(c.ranges.torque.damping)},
        {"noise_ranges", {{"delta", c.env.noise_ranges.delta}, {"joint", c.env.noise_ranges.joint}}},
        {"proxy_real",
         {{"latency_s", c.env.proxy_real.latency_s},
          {"noise_pct", c.env.proxy_real.noise_pct},
          {"stiffness", c.env.proxy_real.stiffness},
          {"damping", c.env.proxy_real.damping}}}}},
      {"ppo",
       {{"gae_lambda", c.ppo.gae_lambda},
        {"gamma", c.ppo.gamma},
        {"learning_rate", c.ppo.learning_rate},
        {"value_coef", c.ppo.value_coef},
        {"entropy_coef", c.ppo.entropy_coef},
        {"clip_range", c.ppo.clip_range},
        {"epochs", c.ppo.epochs},
        {"minibatches", c.ppo.minibatches},
        {"rollout_horizon", c.ppo.rollout_horizon},
        {"adam_beta1", c.ppo.adam_beta1},
        {"adam_beta2", c.ppo.adam_beta2},
        {"adam_epsilon", c.ppo.adam_epsilon},
        {"hidden", c.hidden}}},
      {"ewc",
       {{"lambda", c.continual.lambda},
        {"online_gamma", c.continual.online_gamma},
        {"online_gamma_in_penalty", c.continual.online_gamma_in_penalty},
        {"buffer_episodes", c.continual.fisher.buffer_episodes},
        {"replay_samples", c.continual.fisher.replay_samples},
        {"replay_batch", c.continual.fisher.replay_batch},
        {"d_tgt_squared", c.d_tgt_squared}}},
      {"matrix",
       {{"strategies", strategies},
        {"orderings", c.matrix.orderings},
        {"seeds", c.matrix.seeds},
        {"seed_base", c.matrix.seed_base},
        {"total_budget", c.matrix.total_budget},
        {"pretrain_budget", c.matrix.pretrain_budget},
        {"lambda_grid", c.matrix.lambda_grid}}},
      {"output",
       {{"dir", c.output.dir},
        {"eval_every_fraction", c.output.eval_every_fraction},
        {"eval_episodes", c.output.eval_episodes}}},
  };
}

// Overlays `user` onto `base`, reporting keys that do not exist in `base`
// and values whose JSON kind differs from the default's.
void merge_checked(json& base, const json& user, const std::string& path, std::vector<std::string>& errors) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) {
      errors.push_back(key + ": unknown field");
      continue;
    }
    json& target = base[it.key()];
    if (target.is_object()) {
      if (!it->is_object()) {
        errors.push_back(key + ": expected an object");
        continue;
      }
      merge_checked(target, *it, key, errors);
      continue;
    }
    const bool num_ok = target.is_number() && it->is_number() &&
                        (target.is_number_float() || it->is_number_integer());
    const bool same = (target.is_boolean() && it->is_boolean()) || (target.is_string() && it->is_string()) ||
                      (target.is_array() && it->is_array()) || num_ok;
    if (!same) {
      errors.push_back(key + ": expected " + std::string(target.is_number_integer() ? "an integer" : target.type_name()) +
                       ", got " + it->type_name());
      continue;
    }
    target = *it;
  }
}

void apply_override(json& doc, const std::string& assignment, std::vector<std::string>& errors) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    errors.push_back("--set '" + assignment + "': expected key=value");
    return;
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  // Build a nested object for the dotted key and reuse the checked merge.
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json::json_pointer ptr;
  std::string part;
  std::istringstream ks(key);
  std::vector<std::string> parts;
  while (std::getline(ks, part, '.')) parts.push_back(part);
  const json* node = &doc;
  for (const auto& p : parts) {
    if (!node->is_object() || !node->contains(p)) {
      errors.push_back(key + ": unknown field");
      return;
    }
    node = &(*node)[p];
  }
  // Comma-separated strings for string arrays, e.g. matrix.orderings=TLN,NLT.
  if (node->is_array() && value.is_string()) {
    json arr = json::array();
    std::istringstream vs(value.get<std::string>());
    std::string item;
    while (std::getline(vs, item, ',')) {
      json v = json::parse(item, nullptr, false);
      arr.push_back(v.is_discarded() ? json(item) : v);
    }
    value = arr;
  }
  json patch = value;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  merge_checked(doc, patch, "", errors);
}

class Reader {
 public:
  Reader(const json& doc, std::vector<std::string>& errors) : doc_(doc), errors_(errors) {}

  template <typename T>
  void get(const std::string& path, T& out) {
    try {
      out = at(path).get<T>();
    } catch (const std::exception&) {
      errors_.push_back(path + ": wrong type or shape");
    }
  }

  void range(const std::string& path, randomization::Range& out) {
    std::vector<double> v;
    get(path, v);
    if (v.size() != 2) {
      errors_.push_back(path + ": expected [lo, hi]");
      return;
    }
    out = {v[0], v[1]};
  }

  template <std::size_t N>
  void fixed(const std::string& path, std::array<double, N>& out) {
    std::vector<double> v;
    get(path, v);
    if (v.size() != N) {
      errors_.push_back(path + ": expected " + std::to_string(N) + " numbers");
      return;
    }
    for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
  }

 private:
  const json& at(const std::string& path) const {
    const json* node = &doc_;
    std::istringstream ks(path);
    std::string part;
    while (std::getline(ks, part, '.')) node = &node->at(part);
    return *node;
  }

  const json& doc_;
  std::vector<std::string>& errors_;
};

ExperimentConfig from_json(const json& doc, std::vector<std::string>& errors) {
  ExperimentConfig c;
  Reader r(doc, errors);
  auto& arm = c.env.arm;
  r.fixed("env.arm.link_lengths", arm.link_lengths);
  std::vector<std::vector<double>> limits;
  r.get("env.arm.joint_limits", limits);
  if (limits.size() != 2 || limits[0].size() != 2 || limits[1].size() != 2) {
    errors.push_back("env.arm.joint_limits: expected [[lo, hi], [lo, hi]]");
  } else {
    for (std::size_t j = 0; j < 2; ++j) arm.joint_limits[j] = {limits[j][0], limits[j][1]};
  }
  double deg = 0.0;
  r.get("env.arm.max_joint_speed_deg_s", deg);
  arm.max_joint_speed = deg * kRadPerDeg;
  r.get("env.arm.base_height", arm.base_height);
  r.get("env.arm.floor_z", arm.floor_z);

  auto& ep = c.env.episode;
  r.get("env.episode.horizon", ep.horizon);
  r.get("env.episode.dt", ep.dt);
  r.fixed("env.episode.target", ep.target);
  r.fixed("env.episode.start_q", ep.start_q);
  r.get("env.episode.target_jitter", ep.target_jitter);

  r.range("randomization.latency_s", c.ranges.latency);
  r.range("randomization.noise_pct", c.ranges.noise);
  r.range("randomization.stiffness", c.ranges.torque.stiffness);
  r.range("randomization.damping", c.ranges.torque.damping);
  r.get("randomization.noise_ranges.delta", c.env.noise_ranges.delta);
  r.get("randomization.noise_ranges.joint", c.env.noise_ranges.joint);
  r.get("randomization.proxy_real.latency_s", c.env.proxy_real.latency_s);
  r.get("randomization.proxy_real.noise_pct", c.env.proxy_real.noise_pct);
  r.get("randomization.proxy_real.stiffness", c.env.proxy_real.stiffness);
  r.get("randomization.proxy_real.damping", c.env.proxy_real.damping);

  r.get("ppo.gae_lambda", c.ppo.gae_lambda);
  r.get("ppo.gamma", c.ppo.gamma);
  r.get("ppo.learning_rate", c.ppo.learning_rate);
  r.get("ppo.value_coef", c.ppo.value_coef);
  r.get("ppo.entropy_coef", c.ppo.entropy_coef);
  r.get("ppo.clip_range", c.ppo.clip_range);
  r.get("ppo.epochs", c.ppo.epochs);
  r.get("ppo.minibatches", c.ppo.minibatches);
  r.get("ppo.rollout_horizon", c.ppo.rollout_horizon);
  r.get("ppo.adam_beta1", c.ppo.adam_beta1);
  r.get("ppo.adam_beta2", c.ppo.adam_beta2);
  r.get("ppo.adam_epsilon", c.ppo.adam_epsilon);
  r.get("ppo.hidden", c.hidden);

  r.get("ewc.lambda", c.continual.lambda);
  r.get("ewc.online_gamma", c.continual.online_gamma);
  r.get("ewc.online_gamma_in_penalty", c.continual.online_gamma_in_penalty);
  r.get("ewc.buffer_episodes", c.continual.fisher.buffer_episodes);
  r.get("ewc.replay_samples", c.continual.fisher.replay_samples);
  r.get("ewc.replay_batch", c.continual.fisher.replay_batch);
  r.get("ewc.d_tgt_squared", c.d_tgt_squared);

  std::vector<std::string> strategies;
  r.get("matrix.strategies", strategies);
  c.matrix.strategies.clear();
  for (const auto& s : strategies) {
    try {
      c.matrix.strategies.push_back(strategy::parse_strategy(s));
    } catch (const ConfigError& e) {
      errors.push_back(std::string("matrix.strategies: ") + e.what());
    }
  }
  r.get("matrix.orderings", c.matrix.orderings);
  r.get("matrix.seeds", c.matrix.seeds);
  r.get("matrix.seed_base", c.matrix.seed_base);
  r.get("matrix.total_budget", c.matrix.total_budget);
  r.get("matrix.pretrain_budget", c.matrix.pretrain_budget);
  r.get("matrix.lambda_grid", c.matrix.lambda_grid);

  r.get("output.dir", c.output.dir);
  r.get("output.eval_every_fraction", c.output.eval_every_fraction);
  r.get("output.eval_episodes", c.output.eval_episodes);
  return c;
}

template <typename F>
void collect(std::vector<std::string>& errors, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    errors.emplace_back(e.what());
  }
}

void check_all(const ExperimentConfig& c, std::vector<std::string>& errors) {
  collect(errors, [&] { c.env.episode.validate(c.env.arm); });
  collect(errors, [&] { c.ranges.all().validate(); });
  collect(errors, [&] { c.env.proxy_real.validate(); });
  if (!(c.env.noise_ranges.delta > 0.0) || !(c.env.noise_ranges.joint > 0.0)) {
    errors.emplace_back("randomization.noise_ranges: must be > 0");
  }
  collect(errors, [&] { c.ppo.validate(); });
  if (c.hidden.empty()) errors.emplace_back("ppo.hidden: need at least one hidden layer");
  for (int h : c.hidden) {
    if (h < 1) errors.emplace_back("ppo.hidden: sizes must be >= 1");
  }
  if (!(c.continual.lambda >= 0.0)) errors.emplace_back("ewc.lambda: must be >= 0");
  if (!(c.continual.online_gamma >= 0.0 && c.continual.online_gamma <= 1.0)) {
    errors.emplace_back("ewc.online_gamma: must lie in [0, 1]");
  }
  if (c.continual.fisher.buffer_episodes < 0) errors.emplace_back("ewc.buffer_episodes: must be >= 0");
  if (c.continual.fisher.replay_samples < 0) errors.emplace_back("ewc.replay_samples: must be >= 0");
  if (c.continual.fisher.replay_batch < 1) errors.emplace_back("ewc.replay_batch: must be >= 1");
  for (const auto& o : c.matrix.orderings) {
    collect(errors, [&] { (void)strategy::Ordering::parse(o); });
  }
  if (c.matrix.seeds < 1) errors.emplace_back("matrix.seeds: must be >= 1");
  if (c.matrix.total_budget < 1) errors.emplace_back("matrix.total_budget: must be >= 1");
  const long long rest = c.matrix.total_budget - c.matrix.pretrain_budget;
  if (c.matrix.pretrain_budget < 0 || rest < 0 || rest % 3 != 0) {
    errors.emplace_back("matrix.pretrain_budget: total_budget - pretrain_budget must be a nonnegative multiple of 3");
  }
  for (double l : c.matrix.lambda_grid) {
    if (!(l >= 0.0)) errors.emplace_back("matrix.lambda_grid: values must be >= 0");
  }
  if (c.output.dir.empty()) errors.emplace_back("output.dir: must not be empty");
  if (c.output.eval_episodes < 1) errors.emplace_back("output.eval_episodes: must be >= 1");
  if (!(c.output.eval_every_fraction <= 1.0)) errors.emplace_back("output.eval_every_fraction: must be <= 1");
}

[[noreturn]] void fail(const std::vector<std::string>& errors) {
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  check_all(cfg, errors);
  if (!errors.empty()) fail(errors);
}

ExperimentConfig parse_config(std::string_view json_text, std::span<const std::string> overrides) {
  std::vector<std::string> errors;
  json doc = to_json(ExperimentConfig{});
  if (!json_text.empty()) {
    json user = json::parse(json_text, nullptr, false, true);
    if (user.is_discarded()) throw ConfigError("invalid configuration: not valid JSON");
    if (!user.is_object()) throw ConfigError("invalid configuration: top level must be an object");
    merge_checked(doc, user, "", errors);
  }
  for (const auto& o : overrides) apply_override(doc, o, errors);
  if (!errors.empty()) fail(errors);
  ExperimentConfig cfg = from_json(doc, errors);
  check_all(cfg, errors);
  if (!errors.empty()) fail(errors);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::span<const std::string> overrides) {
  if (path.empty()) return parse_config("", overrides);
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string dump_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cdrlab::experiment
