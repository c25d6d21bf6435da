// Acceptance harness: prints one PASS/FAIL line per criterion.
//   --exact                 property suites (criteria 1-9)
//   --directional --out DIR desk-scale training comparisons (criteria 10-13)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "cdrlab/continual/continual.hpp"
#include "cdrlab/eval/evalkit.hpp"
#include "cdrlab/experiment/experiment.hpp"
#include "cdrlab/io/csv.hpp"
#include "cdrlab/io/snapshot.hpp"
#include "cdrlab/ppo/gae.hpp"
#include "cdrlab/ppo/ppo.hpp"
#include "cdrlab/randomization/randomization.hpp"
#include "cdrlab/strategy/trainer.hpp"
#include "oracles.hpp"

using namespace cdrlab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  fmt::print("[{}] {:>2}. {}: {}\n", ok ? "PASS" : "FAIL", id, name, detail);
  std::fflush(stdout);
  if (!ok) ++failures;
}

double rel_err(const nn::Vector& a, const nn::Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

template <class F>
nn::Vector central_diff(const nn::Vector& x, F&& f) {
  nn::Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    nn::Vector p = x, m = x;
    p(i) += 1e-5;
    m(i) -= 1e-5;
    g(i) = (f(p) - f(m)) / 2e-5;
  }
  return g;
}

// ---- 1 ------------------------------------------------------------------

void gradient_fidelity() {
  ppo::PpoConfig cfg;
  cfg.entropy_coef = 0.01;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(100 + seed);
    auto policy = nn::make_policy(3, 2, {6, 5}, rng);
    auto critic = nn::make_critic(3, {6, 5}, rng);
    std::normal_distribution<double> g(0.0, 0.5);
    nn::Vector th = policy.flatten();
    for (auto& v : th) v += g(rng);
    policy.unflatten(th);
    const int b = 10;
    const nn::Matrix obs = nn::Matrix::NullaryExpr(3, b, [&] { return g(rng); });
    const nn::Matrix act = nn::Matrix::NullaryExpr(2, b, [&] { return g(rng); });
    const nn::Vector adv = nn::Vector::NullaryExpr(b, [&] { return g(rng); });
    const nn::Vector ret = nn::Vector::NullaryExpr(b, [&] { return g(rng); });
    // Old log-probs put every ratio strictly inside or outside the clip band.
    const auto pb = nn::evaluate_batch(policy, obs, act);
    nn::Vector lp_old(b);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < b; ++i) {
      double s;
      do {
        s = u(rng);
      } while (std::abs(std::exp(s) - 1.0 + cfg.clip_range) < 1e-3 || std::abs(std::exp(s) - 1.0 - cfg.clip_range) < 1e-3);
      lp_old(i) = pb.logprob(i) - s;
    }
    const auto loss = ppo::minibatch_loss(policy, critic, obs, act, lp_old, adv, ret, cfg, nullptr);
    const nn::Vector fa = central_diff(policy.flatten(), [&](const nn::Vector& t) {
      auto p = policy;
      p.unflatten(t);
      const auto l = ppo::minibatch_loss(p, critic, obs, act, lp_old, adv, ret, cfg, nullptr);
      return l.surrogate - cfg.entropy_coef * l.entropy;
    });
    const nn::Vector fc = central_diff(critic.net.flatten(), [&](const nn::Vector& t) {
      auto c = critic;
      c.net.unflatten(t);
      return ppo::minibatch_loss(policy, c, obs, act, lp_old, adv, ret, cfg, nullptr).critic;
    });
    worst = std::max({worst, rel_err(loss.actor_grad, fa), rel_err(loss.critic_grad, fc)});
  }
  report(1, "gradient fidelity", worst <= 1e-4, fmt::format("max relative error {:.3e} over 20 instances", worst));
}

// ---- 2 ------------------------------------------------------------------

void gae_oracle() {
  Rng rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> flag(0, 9);
  double worst = 0.0;
  int terminals = 0, truncations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> r, v, nv;
    std::vector<std::uint8_t> term, end;
    for (int t = 0; t < 20; ++t) {
      r.push_back(u(rng));
      v.push_back(u(rng));
      nv.push_back(u(rng));
      const int f = flag(rng);
      term.push_back(f == 0);
      end.push_back(f <= 1);
      terminals += f == 0;
      truncations += f == 1;
    }
    const auto res = ppo::compute_gae(r, v, nv, term, end, 0.99, 0.95);
    const auto ref = oracle::gae_double_sum(r, v, nv, term, end, 0.99, 0.95);
    for (std::size_t t = 0; t < 20; ++t) {
      worst = std::max(worst, std::abs(res.advantages(static_cast<Eigen::Index>(t)) - ref[t]));
    }
  }
  report(2, "GAE oracle", worst <= 1e-10 && terminals > 0 && truncations > 0,
         fmt::format("max abs error {:.3e} ({} terminal, {} truncation flags)", worst, terminals, truncations));
}

// ---- 3 ------------------------------------------------------------------

void ewc_identities() {
  using continual::EwcState;
  bool ok = true;
  std::string detail;
  EwcState s;
  nn::Vector anchor(3);
  anchor << 1.0, -2.0, 0.5;
  nn::Vector f(3);
  f << 1.0, 0.3, 0.7;
  s.anchors.push_back({anchor, f, 5e3});
  const auto at = continual::ewc_penalty(anchor, s);
  ok = ok && at.value == 0.0 && at.gradient.cwiseAbs().maxCoeff() == 0.0;
  s.anchors[0].lambda = 0.0;
  ok = ok && continual::ewc_penalty(nn::Vector::Constant(3, 4.0), s).value == 0.0;

  EwcState hand;
  nn::Vector f2(2);
  f2 << 1.0, 0.5;
  hand.anchors.push_back({nn::Vector::Zero(2), f2, 1.0});
  const auto p = continual::ewc_penalty(nn::Vector::Constant(2, 2.0), hand);
  const bool hand_ok = p.value == 3.0 && p.gradient(0) == 2.0 && p.gradient(1) == 1.0;
  ok = ok && hand_ok;
  detail += fmt::format("hand example penalty {} gradient ({}, {})", p.value, p.gradient(0), p.gradient(1));

  EwcState multi;
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 3; ++k) {
    multi.anchors.push_back({nn::Vector::NullaryExpr(6, [&] { return u(rng) - 0.5; }),
                             nn::Vector::NullaryExpr(6, [&] { return u(rng); }), 10.0 * (k + 1)});
  }
  const nn::Vector theta = nn::Vector::Constant(6, 0.2);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 6; ++i) {
    nn::Vector tp = theta, tm = theta;
    tp(i) += 1e-5;
    tm(i) -= 1e-5;
    const double h =
        (continual::ewc_penalty(tp, multi).gradient(i) - continual::ewc_penalty(tm, multi).gradient(i)) / 2e-5;
    double expected = 0.0;
    for (const auto& a : multi.anchors) expected += a.lambda * a.fisher(i);
    worst = std::max(worst, std::abs(h - expected) / expected);
  }
  ok = ok && worst <= 1e-4;
  report(3, "EWC identities", ok, detail + fmt::format(", Hessian diagonal rel. error {:.3e}", worst));
}

// ---- 4 ------------------------------------------------------------------

void online_recursion() {
  continual::OnlineEwcState s;
  const bool default_gamma = s.gamma == 0.95 && strategy::ContinualSettings{}.online_gamma == 0.95;
  nn::GaussianPolicy policy(nn::Architecture{1, {}, 1});
  nn::Vector f1(3), f2(3), f3(3);
  f1 << 0.1, 1.0, 0.5;
  f2 << 1.0, 0.2, 0.0;
  f3 << 0.3, 0.3, 1.0;
  continual::consolidate_online(s, policy, f1);
  continual::consolidate_online(s, policy, f2);
  continual::consolidate_online(s, policy, f3);
  const nn::Vector expected = s.gamma * s.gamma * f1 + s.gamma * f2 + f3;
  const double err = (s.f_star - expected).cwiseAbs().maxCoeff();

  continual::OnlineEwcState z;
  z.gamma = 0.0;
  continual::consolidate_online(z, policy, f1);
  continual::consolidate_online(z, policy, f2);
  const bool replace = z.f_star == f2;
  report(4, "online-EWC recursion", err <= 1e-12 && replace && default_gamma,
         fmt::format("unroll error {:.3e}, gamma=0 replaces: {}, default gamma {}", err, replace, s.gamma));
}

// ---- 5 ------------------------------------------------------------------

void fisher_properties() {
  auto env = randomization::make_env(env::ArmModel{}, env::EpisodeSpec{}, {randomization::RandomizationSet::full()});
  bool nonneg = true;
  double partition = 0.0;
  bool norm_ok = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const auto policy = nn::make_policy(5, 2, {16, 16}, rng);
    const auto buf = continual::collect_fisher_samples(env, policy, 257, 10, rng);
    const nn::Vector ref = continual::compute_fisher_diag(policy, buf, static_cast<int>(buf.size()));
    nonneg = nonneg && ref.minCoeff() >= 0.0;
    for (int batch : {1, 16, 32, 100}) {
      partition = std::max(partition, (continual::compute_fisher_diag(policy, buf, batch) - ref).cwiseAbs().maxCoeff());
    }
    const nn::Vector n = continual::normalize_fisher(ref);
    Eigen::Index a = 0, b = 0;
    ref.maxCoeff(&a);
    n.maxCoeff(&b);
    const double ratio_err = ((n * ref.maxCoeff()) - ref).cwiseAbs().maxCoeff() / ref.maxCoeff();
    norm_ok = norm_ok && n.maxCoeff() == 1.0 && a == b && ratio_err <= 1e-12;
  }
  norm_ok = norm_ok && continual::normalize_fisher(nn::Vector::Zero(4)).isZero();
  report(5, "Fisher properties", nonneg && partition <= 1e-12 && norm_ok,
         fmt::format("nonnegative: {}, partition difference {:.3e}, normalization ok: {}", nonneg, partition, norm_ok));
}

// ---- 6 ------------------------------------------------------------------

std::vector<double> metric_stream(const strategy::TrainingState& s) {
  std::vector<double> out;
  for (const auto& r : s.log.eval) {
    out.insert(out.end(), {static_cast<double>(r.timestep), r.r_ep, r.continuity, r.d_tgt});
  }
  return out;
}

void finetuning_equals_zero_lambda() {
  using strategy::StrategyKind;
  strategy::TrainerSettings t;
  t.continual.lambda = 0.0;
  t.eval.episodes = 2;
  const auto order = strategy::Ordering::tln().params();
  auto run = [&](StrategyKind kind) {
    const auto schedule = strategy::parameter_phases(order, 2000, strategy::is_continual(kind), 0, {});
    return strategy::run_strategy(schedule, strategy::EnvSettings{}, t, {"micro", kind, "TLN", 11});
  };
  const auto ft = metric_stream(run(StrategyKind::Finetuning));
  const auto ewc = metric_stream(run(StrategyKind::CdrEwc));
  const auto online = metric_stream(run(StrategyKind::CdrOnlineEwc));
  report(6, "finetuning == CDR(lambda=0)", ft == ewc && ft == online && !ft.empty(),
         fmt::format("{} metric values compared, EWC identical: {}, online identical: {}", ft.size(), ft == ewc,
                     ft == online));
}

// ---- 7 ------------------------------------------------------------------

void metric_bounds() {
  Rng rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double lo = 100.0, hi = 0.0, c_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<env::Action> a(2 + trial % 200);
    std::vector<std::array<double, 2>> ref;
    for (auto& x : a) {
      x = {u(rng), u(rng)};
      ref.push_back({x[0], x[1]});
    }
    const double c = eval::continuity_cost(a);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    c_err = std::max(c_err, std::abs(c - oracle::continuity_two_pass(ref)));
  }
  const double constant = eval::continuity_cost(std::vector<env::Action>(50, {0.4, -0.4}));
  std::vector<env::Action> corners;
  for (int t = 0; t < 50; ++t) corners.push_back(t % 2 ? env::Action{1.0, 1.0} : env::Action{-1.0, -1.0});
  const double corner = eval::continuity_cost(corners);

  double r_err = 0.0, d_err = 0.0;
  const env::Vec3 target{0.8, 0.0, 0.3};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> r(500);
    for (auto& x : r) x = 3.0 * (u(rng) - 1.0);
    long double naive = 0.0L;
    for (double x : r) naive += x;
    const double re = eval::episodic_reward(r);
    r_err = std::max({r_err, std::abs(re - oracle::kahan_sum(r)), std::abs(re - static_cast<double>(naive))});

    std::vector<env::Vec3> pos(501);
    std::vector<oracle::Vec3> opos;
    for (auto& p : pos) {
      p = {u(rng), u(rng), u(rng)};
      opos.push_back(p);
    }
    long double acc = 0.0L;
    for (int t = 250; t <= 500; ++t) {
      const auto& p = pos[static_cast<std::size_t>(t)];
      acc += std::hypot(p[0] - target[0], p[1] - target[1], p[2] - target[2]);
    }
    const double d = eval::distance_to_target(pos, target, 500);
    d_err = std::max({d_err, std::abs(d - oracle::window_distance(opos, target, 500, false)),
                      std::abs(d - static_cast<double>(acc / 251.0L))});
  }
  const bool ok = lo >= 0.0 && hi <= 100.0 && c_err <= 1e-12 && constant == 0.0 && std::abs(corner - 100.0) <= 1e-12 &&
                  r_err <= 1e-12 && d_err <= 1e-12;
  report(7, "metric bounds", ok,
         fmt::format("C in [{:.3f}, {:.3f}], constant {}, corners {}, oracle errors C {:.1e} r_ep {:.1e} d_tgt {:.1e}",
                     lo, hi, constant, corner, c_err, r_err, d_err));
}

// ---- 8 ------------------------------------------------------------------

void env_determinism_and_reward() {
  env::EpisodeSpec spec;
  spec.target_jitter = 0.05;
  env::ReacherEnv a(env::ArmModel{}, spec), b(env::ArmModel{}, spec);
  a.reset(42);
  b.reset(42);
  bool identical = true;
  for (int t = 0; t < 500 && !a.episode_over(); ++t) {
    const env::Action act{std::sin(0.05 * t), 0.5 * std::cos(0.03 * t) - 0.2};
    const auto ra = a.step(act);
    const auto rb = b.step(act);
    identical = identical && ra.obs == rb.obs && ra.reward == rb.reward && ra.terminated == rb.terminated;
  }

  // Joint 1 idles, then runs at full speed so it crosses its limit at t = 490.
  env::ReacherEnv e(env::ArmModel{}, env::EpisodeSpec{});
  e.reset(0);
  env::StepResult r;
  for (int t = 0; !e.episode_over(); ++t) r = e.step({t < 204 ? 0.0 : 1.0, 0.0});
  const auto q = e.joint_state().q;
  const auto ee = oracle::fk_homogeneous(0.4, 0.4, 0.3, q[0], q[1]);
  const auto tgt = env::EpisodeSpec{}.target;
  const double d = std::hypot(ee[0] - tgt[0], ee[1] - tgt[1], ee[2] - tgt[2]);
  const double expected = -d * (500 - 490);
  const bool terminal_ok = r.terminated && r.step_index == 490 && std::abs(r.reward - expected) <= 1e-12 &&
                           env::reacher_reward(0.25, true, 490, 500) == -2.5;
  report(8, "environment determinism and reward", identical && terminal_ok,
         fmt::format("bitwise identical: {}, terminal at t={} reward {:.6f} (expected {:.6f})", identical,
                     r.step_index, r.reward, expected));
}

// ---- 9 ------------------------------------------------------------------

void randomization_bounds() {
  using namespace randomization;
  const double dt = env::EpisodeSpec{}.dt;
  const auto set = RandomizationSet::full();
  Rng rng(5);
  bool in_range = true;
  const int lo_steps = static_cast<int>(std::lround(set.latency->lo / dt));
  const int hi_steps = static_cast<int>(std::lround(set.latency->hi / dt));
  for (int i = 0; i < 100000; ++i) {
    const auto d = sample_episode_params(set, dt, rng);
    in_range = in_range && d.delay_steps >= lo_steps && d.delay_steps <= hi_steps && set.noise->contains(d.noise_pct);
    for (std::size_t j = 0; j < env::kNumJoints; ++j) {
      in_range = in_range && set.torque->stiffness.contains(d.stiffness[j]) && set.torque->damping.contains(d.damping[j]);
    }
  }

  bool causal = true;
  std::vector<env::Observation> history;
  for (std::size_t t = 0; t < 200; ++t) {
    history.push_back({static_cast<double>(t), 0, 0, 0, 0});
    for (int delay : {0, 1, 3, 50, 1000}) {
      const auto& o = apply_latency(history, t, delay);
      causal = causal && o[0] <= static_cast<double>(t) && o[0] == static_cast<double>(t > static_cast<std::size_t>(delay) ? t - delay : 0);
    }
  }

  auto wrapped = make_env(env::ArmModel{}, env::EpisodeSpec{}, {});
  env::ReacherEnv bare(env::ArmModel{}, env::EpisodeSpec{});
  bool identical = wrapped.reset(9) == bare.reset(9);
  for (int t = 0; t < 500 && !bare.episode_over(); ++t) {
    const env::Action act{std::sin(0.1 * t), std::cos(0.07 * t)};
    const auto rw = wrapped.step(act);
    const auto rb = bare.step(act);
    identical = identical && rw.obs == rb.obs && rw.reward == rb.reward && rw.done() == rb.done();
  }
  report(9, "randomization bounds", in_range && causal && identical,
         fmt::format("1e5 draws in range: {}, latency causal: {}, all-off identical: {}", in_range, causal, identical));
}

// ---- 10-13 --------------------------------------------------------------

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct RunMeans {
  std::map<eval::EvalEnv, double> r_ep, continuity, d_tgt;
};

RunMeans final_means(const fs::path& out, const std::string& run_id) {
  const auto recs = experiment::final_records(io::parse_eval_csv(io::read_file(experiment::run_dir(out, run_id) / "eval.csv")));
  RunMeans m;
  std::map<eval::EvalEnv, int> n;
  for (const auto& r : recs) {
    m.r_ep[r.eval_env] += r.r_ep;
    m.continuity[r.eval_env] += r.continuity;
    m.d_tgt[r.eval_env] += r.d_tgt;
    ++n[r.eval_env];
  }
  for (auto& [env, count] : n) {
    m.r_ep[env] /= count;
    m.continuity[env] /= count;
    m.d_tgt[env] /= count;
  }
  return m;
}

int directional(const fs::path& out) {
  using eval::EvalEnv;
  using strategy::StrategyKind;
  const experiment::ExperimentConfig cfg;
  auto runs = experiment::train_matrix(cfg);
  const auto sweep = experiment::sweep_matrix(cfg);
  std::vector<experiment::RunSpec> all = runs;
  for (const auto& s : sweep) {
    if (std::none_of(all.begin(), all.end(), [&](const auto& r) { return r.run_id == s.run_id; })) all.push_back(s);
  }
  experiment::ExecuteOptions opts;
  opts.out_dir = out;
  opts.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  fmt::print("training {} runs into {} (completed runs are reused)\n", all.size(), out.string());
  std::fflush(stdout);
  int failed = 0;
  for (const auto& o : experiment::execute(cfg, all, opts)) {
    if (o.status == experiment::RunStatus::Failed || o.status == experiment::RunStatus::Refused) {
      fmt::print("run {} {}: {}\n", o.run_id, experiment::to_string(o.status), o.message);
      ++failed;
    }
  }
  if (failed > 0) {
    for (int id = 10; id <= 13; ++id) report(id, "directional", false, "training did not complete");
    return 1;
  }

  std::map<std::string, RunMeans> means;
  for (const auto& r : all) means[r.run_id] = final_means(out, r.run_id);
  auto collect = [&](StrategyKind kind, const std::string& ordering, auto field, EvalEnv env) {
    std::vector<double> v;
    for (const auto& r : runs) {
      if (r.kind == kind && (ordering.empty() || r.ordering == ordering)) v.push_back((means[r.run_id].*field).at(env));
    }
    return median(v);
  };

  const double ideal_sim_r = collect(StrategyKind::Ideal, "", &RunMeans::r_ep, EvalEnv::Ideal);
  const double ideal_real_r = collect(StrategyKind::Ideal, "", &RunMeans::r_ep, EvalEnv::ProxyReal);
  const double ideal_sim_c = collect(StrategyKind::Ideal, "", &RunMeans::continuity, EvalEnv::Ideal);
  const double ideal_real_c = collect(StrategyKind::Ideal, "", &RunMeans::continuity, EvalEnv::ProxyReal);
  report(10, "reality gap exists", ideal_real_r < ideal_sim_r && ideal_real_c > ideal_sim_c,
         fmt::format("Ideal median r_ep sim {:.2f} vs proxy-real {:.2f} (gap {:.2f}); C sim {:.2f} vs proxy-real {:.2f}",
                     ideal_sim_r, ideal_real_r, ideal_sim_r - ideal_real_r, ideal_sim_c, ideal_real_c));

  const double ideal_d = collect(StrategyKind::Ideal, "", &RunMeans::d_tgt, EvalEnv::ProxyReal);
  const double rand_d = collect(StrategyKind::Randomized, "", &RunMeans::d_tgt, EvalEnv::ProxyReal);
  report(11, "randomization helps transfer", rand_d < ideal_d,
         fmt::format("median proxy-real d_tgt Randomized {:.4f} m vs Ideal {:.4f} m (difference {:+.4f})", rand_d,
                     ideal_d, rand_d - ideal_d));

  auto gap = [&](StrategyKind k) {
    return std::abs(collect(k, "TLN", &RunMeans::r_ep, EvalEnv::ProxyReal) -
                    collect(k, "NLT", &RunMeans::r_ep, EvalEnv::ProxyReal));
  };
  const double online_gap = gap(StrategyKind::CdrOnlineEwc);
  const double ft_gap = gap(StrategyKind::Finetuning);
  const double ewc_gap = gap(StrategyKind::CdrEwc);
  report(12, "CDR ordering robustness", online_gap <= ft_gap,
         fmt::format("|TLN - NLT| median proxy-real r_ep: cdr-online-ewc {:.2f}, finetuning {:.2f} (cdr-ewc {:.2f})",
                     online_gap, ft_gap, ewc_gap));

  std::map<double, std::vector<double>> by_lambda;
  for (const auto& r : sweep) by_lambda[*r.lambda].push_back(means[r.run_id].r_ep.at(EvalEnv::ProxyReal));
  double best_lambda = 0.0, best = -INFINITY;
  std::string curve;
  for (const auto& [lambda, values] : by_lambda) {
    const double m = median(values);
    curve += fmt::format("\n      lambda {:>8g}: median proxy-real r_ep {:.2f} ({} runs)", lambda, m, values.size());
    if (m > best) {
      best = m;
      best_lambda = lambda;
    }
  }
  const bool interior = by_lambda.size() >= 3 && best_lambda != by_lambda.begin()->first &&
                        best_lambda != by_lambda.rbegin()->first;
  report(13, "lambda sweep has an interior optimum", interior,
         fmt::format("best lambda {:g} (median r_ep {:.2f}){}", best_lambda, best, curve));
  experiment::write_sweep_tables(out, sweep);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cdrlab acceptance harness"};
  bool exact = false, directional_mode = false;
  std::string out = "acceptance_runs";
  app.add_flag("--exact", exact, "run property suites (criteria 1-9)");
  app.add_flag("--directional", directional_mode, "run desk-scale comparisons (criteria 10-13)");
  app.add_option("--out", out, "output directory for directional training runs");
  CLI11_PARSE(app, argc, argv);
  if (!exact && !directional_mode) exact = directional_mode = true;

  if (exact) {
    gradient_fidelity();
    gae_oracle();
    ewc_identities();
    online_recursion();
    fisher_properties();
    finetuning_equals_zero_lambda();
    metric_bounds();
    env_determinism_and_reward();
    randomization_bounds();
  }
  if (directional_mode) directional(out);
  fmt::print("{} criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
