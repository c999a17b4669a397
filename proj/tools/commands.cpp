#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "crossway/checkpoint.hpp"
#include "crossway/csv.hpp"
#include "crossway/evaluate.hpp"
#include "crossway/rng.hpp"
#include "crossway/transfer.hpp"
#include "json.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace crossway::cli {
namespace {

// Seed streams owned by the command layer (the library owns 100-402xxx and
// 5000+; these sit outside those ranges).
constexpr std::uint64_t kStandaloneEvalStream = 210;
constexpr std::uint64_t kReverseBaselineStream = 305;
constexpr std::uint64_t kLifelongSeedBase = 7000;

ExperimentConfig experiment_config(const RunConfig& cfg) {
  ExperimentConfig ec;
  ec.train = cfg.train;
  ec.tasks = cfg.tasks;
  ec.eval_episodes = cfg.eval_episodes;
  ec.seeds = cfg.seeds;
  ec.master_seed = cfg.master_seed;
  ec.max_threads = cfg.max_threads;
  return ec;
}

void echo_config(const RunConfig& cfg) {
  for (const auto& [k, v] : cfg.entries()) {
    std::cout << k << " = " << v << "\n";
  }
}

void write_learning_curve(RunManifest& man, const std::string& rel,
                          const std::vector<CurvePoint>& curve) {
  CsvWriter csv(man.path(rel), {"iteration", "mean_loss", "eval_success_rate",
                                "eval_collision_rate"});
  for (const CurvePoint& p : curve) {
    csv.row({std::to_string(p.iteration), format_metric(p.mean_loss),
             format_metric(p.success_rate), format_metric(p.collision_rate)});
  }
  csv.close();
  man.add_artifact(rel);
}

void matrix_rows(CsvWriter& csv, const std::string& train_task,
                 const EvaluationReport& rep) {
  const std::string eval_task = to_string(rep.task);
  csv.row({train_task, eval_task, "pct_success", format_metric(rep.pct_success)});
  csv.row({train_task, eval_task, "pct_collision", format_metric(rep.pct_collision)});
  csv.row({train_task, eval_task, "pct_timeout", format_metric(rep.pct_timeout)});
  csv.row({train_task, eval_task, "avg_time_success",
           format_metric(rep.avg_time_success)});
  csv.row({train_task, eval_task, "avg_brake_time",
           format_metric(rep.avg_brake_time)});
}

void write_eval_report(RunManifest& man, const std::string& rel,
                       const EvaluationReport& rep) {
  CsvWriter csv(man.path(rel),
                {"task", "n_episodes", "pct_success", "pct_collision",
                 "pct_timeout", "avg_time_success", "avg_brake_time"});
  csv.row({to_string(rep.task), std::to_string(rep.n_episodes),
           format_metric(rep.pct_success), format_metric(rep.pct_collision),
           format_metric(rep.pct_timeout), format_metric(rep.avg_time_success),
           format_metric(rep.avg_brake_time)});
  csv.close();
  man.add_artifact(rel);
}

void save_params(RunManifest& man, const std::string& rel,
                 const std::vector<double>& params) {
  QNetwork net;
  net.params() = params;
  save_network(man.path(rel), net);
  man.add_artifact(rel);
}

void print_report_line(const EvaluationReport& rep) {
  std::printf(
      "  %-9s success %6.2f%%  collision %6.2f%%  timeout %6.2f%%  "
      "time-to-cross %5.2fs  brake %5.2fs\n",
      to_string(rep.task).c_str(), rep.pct_success, rep.pct_collision,
      rep.pct_timeout, rep.avg_time_success, rep.avg_brake_time);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation; zero for fewer than two samples.
double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

int cmd_train(const Invocation& inv) {
  const RunConfig& cfg = inv.cfg;
  echo_config(cfg);
  const fs::path dir = create_run_dir(resolve_out_root(cfg.out_root),
                                      cfg.run_name, "train", cfg.master_seed);
  RunManifest man("train", dir, cfg, inv.flag_overrides);

  const int idx = static_cast<int>(cfg.task);
  TrainConfig train = cfg.train;
  train.seed = derive_seed(cfg.master_seed, 100 + idx);
  if (train.snapshot_every <= 0) {
    train.snapshot_every = std::max(1, train.iterations / 10);
  }
  Trainer trainer(cfg.task, train);
  trainer.run();

  save_params(man, "final.ckpt", trainer.network().params());
  write_learning_curve(man, "learning_curve.csv", trainer.curve());

  const EvaluationReport rep =
      evaluate(trainer.network(), cfg.task, cfg.eval_episodes, cfg.train.sim,
               derive_seed(cfg.master_seed, 200 + idx * 16 + idx));
  write_eval_report(man, "eval.csv", rep);
  man.finish();

  std::cout << "trained " << to_string(cfg.task) << " for " << train.iterations
            << " iterations\n";
  print_report_line(rep);
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_evaluate(const Invocation& inv) {
  const RunConfig& cfg = inv.cfg;
  if (cfg.checkpoint.empty()) {
    throw std::runtime_error("evaluate needs --checkpoint");
  }
  echo_config(cfg);
  const QNetwork net = load_network(cfg.checkpoint);
  const fs::path dir = create_run_dir(resolve_out_root(cfg.out_root),
                                      cfg.run_name, "evaluate", cfg.master_seed);
  RunManifest man("evaluate", dir, cfg, inv.flag_overrides);

  const EvaluationReport rep =
      evaluate(net, cfg.task, cfg.eval_episodes, cfg.train.sim,
               derive_seed(cfg.master_seed, kStandaloneEvalStream));
  write_eval_report(man, "eval.csv", rep);
  man.finish();

  print_report_line(rep);
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_direct_copy(const Invocation& inv) {
  const RunConfig& cfg = inv.cfg;
  echo_config(cfg);
  const fs::path dir = create_run_dir(resolve_out_root(cfg.out_root),
                                      cfg.run_name, "direct-copy", cfg.master_seed);
  RunManifest man("direct-copy", dir, cfg, inv.flag_overrides);

  const std::vector<DirectCopyRun> runs = direct_copy_sweep(experiment_config(cfg));

  for (std::size_t s = 0; s < runs.size(); ++s) {
    const DirectCopyRun& run = runs[s];
    const std::string seed_dir = "seed_" + std::to_string(s);
    fs::create_directories(dir / seed_dir);

    const std::string matrix_rel = seed_dir + "/matrix.csv";
    CsvWriter csv(man.path(matrix_rel),
                  {"train_task", "eval_task", "metric", "value"});
    for (std::size_t t = 0; t < run.matrix.tasks.size(); ++t) {
      for (std::size_t e = 0; e < run.matrix.tasks.size(); ++e) {
        matrix_rows(csv, to_string(run.matrix.tasks[t]), run.matrix.cells[t][e]);
      }
    }
    csv.close();
    man.add_artifact(matrix_rel);

    for (std::size_t t = 0; t < run.matrix.tasks.size(); ++t) {
      const std::string task = to_string(run.matrix.tasks[t]);
      save_params(man, seed_dir + "/" + task + ".ckpt", run.trained_params[t]);
      write_learning_curve(man, seed_dir + "/" + task + "_curve.csv", run.curves[t]);
    }

    std::cout << "seed " << s << " diagonal:\n";
    for (std::size_t t = 0; t < run.matrix.tasks.size(); ++t) {
      print_report_line(run.matrix.cells[t][t]);
    }
  }
  man.finish();
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

namespace {

void write_transfer_curve(RunManifest& man, const std::string& rel,
                          const std::vector<std::pair<std::string, const std::vector<CurvePoint>*>>& branches) {
  CsvWriter csv(man.path(rel),
                {"experiment_id", "iteration", "task", "success_rate", "stddev"});
  for (const auto& [id, curve] : branches) {
    for (const CurvePoint& p : *curve) {
      csv.row({id, std::to_string(p.iteration), to_string(p.task),
               format_metric(p.success_rate), format_metric(0.0)});
    }
  }
  csv.close();
  man.add_artifact(rel);
}

}  // namespace

int cmd_fine_tune(const Invocation& inv) {
  const RunConfig& cfg = inv.cfg;
  echo_config(cfg);
  const fs::path dir = create_run_dir(resolve_out_root(cfg.out_root),
                                      cfg.run_name, "fine-tune", cfg.master_seed);
  RunManifest man("fine-tune", dir, cfg, inv.flag_overrides);

  const FineTuneResult ft =
      fine_tune_experiment(cfg.source, cfg.target, cfg.pretrain_iterations,
                           cfg.finetune_iterations, experiment_config(cfg),
                           cfg.master_seed);

  write_transfer_curve(man, "curve.csv",
                       {{"pretrained", &ft.pretrained_curve},
                        {"fresh", &ft.fresh_curve}});
  save_params(man, "finetuned.ckpt", ft.finetuned_params);
  save_params(man, "fresh.ckpt", ft.fresh_params);
  man.finish();

  const auto first_success = [](const std::vector<CurvePoint>& c) {
    return c.empty() ? 0.0 : c.front().success_rate;
  };
  std::cout << "fine-tune " << to_string(cfg.source) << " -> "
            << to_string(cfg.target) << ": jumpstart "
            << format_metric(first_success(ft.pretrained_curve)) << "% vs fresh "
            << format_metric(first_success(ft.fresh_curve)) << "%\n";
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_reverse(const Invocation& inv) {
  const RunConfig& cfg = inv.cfg;
  echo_config(cfg);
  const fs::path dir = create_run_dir(resolve_out_root(cfg.out_root),
                                      cfg.run_name, "reverse", cfg.master_seed);
  RunManifest man("reverse", dir, cfg, inv.flag_overrides);

  const ExperimentConfig ec = experiment_config(cfg);
  const FineTuneResult ft =
      fine_tune_experiment(cfg.source, cfg.target, cfg.pretrain_iterations,
                           cfg.finetune_iterations, ec, cfg.master_seed);

  // Baseline: a network that only ever saw the target task, tested on the
  // source task.
  QNetwork fresh;
  fresh.params() = ft.fresh_params;
  const EvaluationReport baseline =
      evaluate(fresh, cfg.source, cfg.eval_episodes, cfg.train.sim,
               derive_seed(cfg.master_seed, kReverseBaselineStream));

  const RetentionEntry entry = reverse_transfer_experiment(
      ft.finetuned_params, cfg.source, cfg.target, baseline.pct_success, ec,
      cfg.master_seed);

  CsvWriter csv(man.path("retention.csv"), {"source", "target", "retention_points"});
  csv.row({to_string(entry.source), to_string(entry.target),
           format_metric(entry.retention_points)});
  csv.close();
  man.add_artifact("retention.csv");
  save_params(man, "finetuned.ckpt", ft.finetuned_params);
  man.finish();

  std::printf(
      "retention %s -> %s: fine-tuned %.2f%% on source, baseline %.2f%%, "
      "retained %+.2f points\n",
      to_string(entry.source).c_str(), to_string(entry.target).c_str(),
      entry.finetuned_on_source, entry.direct_copy_baseline,
      entry.retention_points);
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_lifelong(const Invocation& inv) {
  const RunConfig& cfg = inv.cfg;
  echo_config(cfg);
  const fs::path dir = create_run_dir(resolve_out_root(cfg.out_root),
                                      cfg.run_name, "lifelong", cfg.master_seed);
  RunManifest man("lifelong", dir, cfg, inv.flag_overrides);

  LifelongSchedule schedule;
  for (ScenarioId id : cfg.lifelong_order) {
    schedule.blocks.emplace_back(id, cfg.lifelong_block_iterations);
  }
  schedule.eval_cadence = cfg.lifelong_eval_cadence;
  schedule.eval_episodes = cfg.lifelong_eval_episodes;

  std::vector<LifelongResult> results;
  for (int s = 0; s < cfg.seeds; ++s) {
    results.push_back(lifelong_experiment(
        schedule, cfg.train, derive_seed(cfg.master_seed, kLifelongSeedBase + s)));
  }

  // Every seed shares the schedule, so the sweep grid lines up row for row.
  const std::size_t n_points = results.front().points.size();
  CsvWriter curve(man.path("curve.csv"),
                  {"experiment_id", "iteration", "task", "success_rate", "stddev"});
  for (std::size_t p = 0; p < n_points; ++p) {
    for (ScenarioId task : kAllScenarios) {
      std::vector<double> vals;
      for (const LifelongResult& r : results) {
        vals.push_back(r.points[p].success[static_cast<int>(task)]);
      }
      curve.row({"lifelong", std::to_string(results.front().points[p].iteration),
                 to_string(task), format_metric(mean_of(vals)),
                 format_metric(stddev_of(vals))});
    }
  }
  curve.close();
  man.add_artifact("curve.csv");

  CsvWriter forget(man.path("forgetting.csv"), {"task", "peak", "final", "drop"});
  std::cout << "peak/final success per task (mean over " << cfg.seeds
            << " seed(s)):\n";
  for (ScenarioId task : kAllScenarios) {
    std::vector<double> peaks, finals;
    for (const LifelongResult& r : results) {
      peaks.push_back(r.peak[static_cast<int>(task)]);
      finals.push_back(r.final[static_cast<int>(task)]);
    }
    const double peak = mean_of(peaks);
    const double fin = mean_of(finals);
    forget.row({to_string(task), format_metric(peak), format_metric(fin),
                format_metric(peak - fin)});
    std::printf("  %-9s peak %6.2f%%  final %6.2f%%  drop %6.2f\n",
                to_string(task).c_str(), peak, fin, peak - fin);
  }
  forget.close();
  man.add_artifact("forgetting.csv");
  man.finish();
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

int cmd_geometry(const std::string& out_file) {
  const std::string_view text = builtin_geometry_text();
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_file);
    out << text;
  }
  return 0;
}

namespace {

// Minimal reader for the CSVs this tool writes (no quoting in practice).
std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

int cmd_report(const std::string& root, const std::string& out_file) {
  const fs::path base = root.empty() ? resolve_out_root("") : fs::path(root);
  if (!fs::exists(base)) {
    throw std::runtime_error("no runs found under " + base.string());
  }

  // (train, eval) -> success percentages, one per seed, over all
  // direct-copy runs below the root.
  std::map<std::pair<std::string, std::string>, std::vector<double>> success;
  int runs_seen = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base)) {
    if (!entry.is_regular_file() || entry.path().filename() != "manifest.json") {
      continue;
    }
    std::ifstream in(entry.path());
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception&) {
      continue;  // unfinished or foreign file
    }
    if (doc.value("command", "") != "direct-copy") continue;
    ++runs_seen;
    const fs::path run_dir = entry.path().parent_path();
    for (const auto& art : doc.value("artifacts", nlohmann::json::array())) {
      const std::string rel = art.value("path", "");
      if (rel.size() < 10 || rel.substr(rel.size() - 10) != "matrix.csv") continue;
      const auto rows = read_csv(run_dir / rel);
      for (std::size_t i = 1; i < rows.size(); ++i) {  // skip header
        const auto& r = rows[i];
        if (r.size() != 4 || r[2] != "pct_success") continue;
        success[{r[0], r[1]}].push_back(std::strtod(r[3].c_str(), nullptr));
      }
    }
  }
  if (runs_seen == 0 || success.empty()) {
    throw std::runtime_error("no runs found under " + base.string());
  }

  std::ostringstream out;
  out << "direct-copy success matrix, mean";
  const std::size_t n_seeds = success.begin()->second.size();
  out << " +/- stddev over " << n_seeds << " seed(s)\n";
  out << "rows: training task; columns: evaluation task\n\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-10s", "");
  out << buf;
  for (ScenarioId e : kAllScenarios) {
    std::snprintf(buf, sizeof buf, " %14s", to_string(e).c_str());
    out << buf;
  }
  out << "\n";
  for (ScenarioId t : kAllScenarios) {
    std::snprintf(buf, sizeof buf, "%-10s", to_string(t).c_str());
    out << buf;
    for (ScenarioId e : kAllScenarios) {
      const auto it = success.find({to_string(t), to_string(e)});
      if (it == success.end()) {
        std::snprintf(buf, sizeof buf, " %14s", "-");
      } else {
        std::snprintf(buf, sizeof buf, " %6.1f +/-%4.1f", mean_of(it->second),
                      stddev_of(it->second));
      }
      out << buf;
    }
    out << "\n";
  }

  std::cout << out.str();
  if (!out_file.empty()) {
    std::ofstream f(out_file, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + out_file);
    f << out.str();
  }
  return 0;
}

}  // namespace crossway::cli
