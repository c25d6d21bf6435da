#include "cdrlab/report/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "cdrlab/eval/evalkit.hpp"
#include "cdrlab/experiment/experiment.hpp"
#include "cdrlab/io/csv.hpp"
#include "cdrlab/io/snapshot.hpp"
#include "cdrlab/report/svg.hpp"
#include "json.hpp"

namespace cdrlab::report {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct LoadedRun {
  experiment::StoredRun meta;
  std::vector<eval::EvalRecord> eval;
};

std::string group_name(const std::string& strategy, const std::string& ordering) {
  return ordering == "-" ? strategy : strategy + " " + ordering;
}

}  // namespace

ReportResult generate_report(const fs::path& out_dir) {
  ReportResult res;
  res.report_dir = out_dir / "report";
  fs::create_directories(res.report_dir);
  const fs::path root = experiment::runs_root(out_dir);

  std::vector<LoadedRun> runs;
  if (fs::is_directory(root)) {
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root)) {
      if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
      LoadedRun run;
      try {
        run.meta = experiment::read_manifest(dir);
      } catch (const std::exception& e) {
        res.problems.push_back(dir.filename().string() + ": manifest: " + e.what());
        continue;
      }
      if (!run.meta.complete) res.problems.push_back(dir.filename().string() + ": incomplete run (partial logs used)");
      try {
        run.eval = io::parse_eval_csv(io::read_file(dir / "eval.csv"));
      } catch (const std::exception& e) {
        res.problems.push_back(dir.filename().string() + ": eval.csv: " + e.what());
        continue;
      }
      res.eval_rows += run.eval.size();
      runs.push_back(std::move(run));
    }
  }
  res.runs = runs.size();

  // Summary over each run's final evaluation.
  std::vector<eval::EvalRecord> finals;
  for (const auto& r : runs) {
    auto f = experiment::final_records(r.eval);
    finals.insert(finals.end(), f.begin(), f.end());
  }
  res.final_records = finals.size();
  const auto summary = eval::aggregate(finals);
  res.summary_rows = summary.size();
  io::write_file_atomic(res.report_dir / "summary.csv", io::summary_csv(summary));
  io::write_file_atomic(res.report_dir / "summary.txt",
                        runs.empty() ? std::string("no runs found in ") + root.string() + "\n"
                                     : io::summary_table(summary));

  // Progress: mean eval reward per (strategy, ordering, env, timestep) over seeds and episodes.
  using Key = std::tuple<std::string, std::string, int>;
  std::map<Key, std::map<long long, std::vector<double>>> progress;
  std::map<std::pair<std::string, std::string>, std::set<std::tuple<int, std::string, long long, long long>>> bounds;
  for (const auto& r : runs) {
    for (const auto& e : r.eval) {
      progress[{e.strategy, e.ordering, static_cast<int>(e.eval_env)}][e.timestep].push_back(e.r_ep);
    }
    for (const auto& p : r.meta.phases) {
      bounds[{r.meta.strategy, r.meta.ordering}].insert({p.phase_index, p.label, p.start_timestep, p.end_timestep});
    }
  }
  std::string pcsv = "strategy,ordering,eval_env,timestep,episodes,r_ep_mean,r_ep_std,r_ep_median\n";
  std::map<int, LineChart> charts;
  for (const auto& [key, by_t] : progress) {
    const auto& [strat, ord, env] = key;
    Series s{group_name(strat, ord), {}, {}};
    for (const auto& [t, vals] : by_t) {
      const auto m = eval::summarize(vals);
      pcsv += strat + "," + ord + "," + eval::to_string(static_cast<eval::EvalEnv>(env)) + "," + std::to_string(t) +
              "," + std::to_string(vals.size()) + "," + io::format_double(m.mean) + "," + io::format_double(m.std) +
              "," + io::format_double(m.median) + "\n";
      s.x.push_back(static_cast<double>(t));
      s.y.push_back(m.mean);
    }
    auto& chart = charts[env];
    chart.series.push_back(std::move(s));
    ++res.progress_series;
  }
  io::write_file_atomic(res.report_dir / "progress.csv", pcsv);

  std::string bcsv = "strategy,ordering,phase,label,start_timestep,end_timestep\n";
  std::set<long long> marks;
  for (const auto& [key, phases] : bounds) {
    for (const auto& [idx, label, start, end] : phases) {
      bcsv += key.first + "," + key.second + "," + std::to_string(idx) + "," + label + "," + std::to_string(start) +
              "," + std::to_string(end) + "\n";
      if (start > 0) marks.insert(start);
    }
  }
  io::write_file_atomic(res.report_dir / "phase_boundaries.csv", bcsv);
  for (auto& [env, chart] : charts) {
    const std::string name = eval::to_string(static_cast<eval::EvalEnv>(env));
    chart.title = "Training progress (" + name + ")";
    chart.x_label = "timestep";
    chart.y_label = "mean evaluation reward";
    chart.markers.assign(marks.begin(), marks.end());
    io::write_file_atomic(res.report_dir / ("progress_" + name + ".svg"), render_svg(chart));
  }

  // Lambda sweep: median over runs of each run's mean final proxy-real reward.
  std::map<std::string, std::map<double, std::vector<double>>> sweep;
  std::set<double> lambdas;
  for (const auto& r : runs) {
    if (!r.meta.lambda) continue;
    std::vector<double> v;
    for (const auto& e : experiment::final_records(r.eval)) {
      if (e.eval_env == eval::EvalEnv::ProxyReal) v.push_back(e.r_ep);
    }
    if (v.empty()) continue;
    const double run_mean = eval::summarize(v).mean;
    sweep[r.meta.strategy][*r.meta.lambda].push_back(run_mean);
    sweep["all"][*r.meta.lambda].push_back(run_mean);
    lambdas.insert(*r.meta.lambda);
  }
  if (lambdas.size() > 1) {
    res.lambda_sweep = true;
    std::string scsv = "strategy,lambda,runs,proxy_real_r_ep_median,proxy_real_r_ep_mean\n";
    LineChart chart{"Effect of the regularization constant", "lambda", "median proxy-real reward", {}, {}, true};
    for (const auto& [strat, by_l] : sweep) {
      Series s{strat, {}, {}};
      for (const auto& [l, vals] : by_l) {
        const auto m = eval::summarize(vals);
        scsv += strat + "," + io::format_double(l) + "," + std::to_string(vals.size()) + "," +
                io::format_double(m.median) + "," + io::format_double(m.mean) + "\n";
        s.x.push_back(l);
        s.y.push_back(m.median);
      }
      chart.series.push_back(std::move(s));
    }
    io::write_file_atomic(res.report_dir / "lambda_sweep.csv", scsv);
    io::write_file_atomic(res.report_dir / "lambda_sweep.svg", render_svg(chart));
  }

  std::string ptxt;
  for (const auto& p : res.problems) ptxt += p + "\n";
  io::write_file_atomic(res.report_dir / "problems.txt", ptxt);
  json j{{"status", runs.empty() ? "no runs" : "ok"},
         {"runs", res.runs},
         {"eval_rows", res.eval_rows},
         {"final_records", res.final_records},
         {"summary_rows", res.summary_rows},
         {"progress_series", res.progress_series},
         {"lambda_sweep", res.lambda_sweep},
         {"problems", res.problems}};
  io::write_file_atomic(res.report_dir / "report.json", j.dump(2) + "\n");
  return res;
}

}  // namespace cdrlab::report
