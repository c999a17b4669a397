#include "crossway/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace crossway {

namespace {

// Stream tags for seeds derived from an experiment seed.
constexpr std::uint64_t kTrainStreamBase = 100;
constexpr std::uint64_t kEvalStreamBase = 200;
constexpr std::uint64_t kPretrainStream = 301;
constexpr std::uint64_t kWarmStream = 302;
constexpr std::uint64_t kFreshStream = 303;
constexpr std::uint64_t kReverseEvalStream = 304;
constexpr std::uint64_t kLifelongStream = 401;
constexpr std::uint64_t kSweepStreamBase = 402000;
constexpr std::uint64_t kSeedStreamBase = 5000;

int task_index(const std::vector<ScenarioId>& tasks, ScenarioId id) {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i] == id) return static_cast<int>(i);
  }
  throw std::runtime_error("task " + to_string(id) + " is not part of this matrix");
}

}  // namespace

void parallel_for(int n, const std::function<void(int)>& fn, int max_threads) {
  if (n <= 0) return;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int workers = std::min(n, max_threads > 0 ? max_threads : hw);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void ExperimentConfig::validate() const {
  train.validate();
  if (tasks.empty()) throw std::runtime_error("experiment needs at least one task");
  if (eval_episodes < 1) throw std::runtime_error("eval_episodes must be positive");
  if (seeds < 1) throw std::runtime_error("seeds must be positive");
}

const EvaluationReport& TransferMatrix::at(ScenarioId trained_on,
                                           ScenarioId evaluated_on) const {
  return cells[task_index(tasks, trained_on)][task_index(tasks, evaluated_on)];
}

DirectCopyRun direct_copy_experiment(const ExperimentConfig& cfg,
                                     std::uint64_t seed) {
  cfg.validate();
  int n = static_cast<int>(cfg.tasks.size());
  DirectCopyRun run;
  run.seed = seed;
  run.matrix.tasks = cfg.tasks;
  run.matrix.cells.assign(n, std::vector<EvaluationReport>(n));
  run.trained_params.assign(n, {});
  run.curves.assign(n, {});

  parallel_for(
      n,
      [&](int t) {
        TrainConfig train = cfg.train;
        train.seed = derive_seed(seed, kTrainStreamBase + t);
        Trainer trainer(cfg.tasks[t], train);
        trainer.run();
        run.trained_params[t] = trainer.network().params();
        run.curves[t] = trainer.curve();
        for (int e = 0; e < n; ++e) {
          run.matrix.cells[t][e] =
              evaluate(trainer.network(), cfg.tasks[e], cfg.eval_episodes,
                       cfg.train.sim,
                       derive_seed(seed, kEvalStreamBase + t * 16 + e));
        }
      },
      cfg.max_threads);
  return run;
}

std::vector<DirectCopyRun> direct_copy_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<DirectCopyRun> runs(cfg.seeds);
  for (int s = 0; s < cfg.seeds; ++s) {
    runs[s] =
        direct_copy_experiment(cfg, derive_seed(cfg.master_seed, kSeedStreamBase + s));
  }
  return runs;
}

FineTuneResult fine_tune_from(const std::vector<double>& source_params,
                              ScenarioId source, ScenarioId target,
                              int finetune_iters, const ExperimentConfig& cfg,
                              std::uint64_t seed) {
  cfg.validate();
  if (source_params.size() != static_cast<std::size_t>(QNetwork::param_count())) {
    throw std::runtime_error("source parameter vector has the wrong size");
  }
  FineTuneResult result;
  result.source = source;
  result.target = target;

  TrainConfig branch = cfg.train;
  branch.iterations = finetune_iters;
  if (branch.snapshot_every <= 0) {
    branch.snapshot_every = std::max(1, finetune_iters / 10);
  }

  QNetwork warm;
  warm.params() = source_params;
  TrainConfig warm_cfg = branch;
  warm_cfg.seed = derive_seed(seed, kWarmStream);
  Trainer warm_trainer(target, warm_cfg, std::move(warm));
  warm_trainer.run();
  result.pretrained_curve = warm_trainer.curve();
  result.finetuned_params = warm_trainer.network().params();

  TrainConfig fresh_cfg = branch;
  fresh_cfg.seed = derive_seed(seed, kFreshStream);
  Trainer fresh_trainer(target, fresh_cfg);
  fresh_trainer.run();
  result.fresh_curve = fresh_trainer.curve();
  result.fresh_params = fresh_trainer.network().params();
  return result;
}

FineTuneResult fine_tune_experiment(ScenarioId source, ScenarioId target,
                                    int pretrain_iters, int finetune_iters,
                                    const ExperimentConfig& cfg,
                                    std::uint64_t seed) {
  cfg.validate();
  if (pretrain_iters < 0 || finetune_iters < 0) {
    throw std::runtime_error("iteration counts cannot be negative");
  }
  TrainConfig pre = cfg.train;
  pre.iterations = pretrain_iters;
  pre.snapshot_every = 0;
  pre.seed = derive_seed(seed, kPretrainStream);
  Trainer pretrainer(source, pre);
  pretrainer.run();
  return fine_tune_from(pretrainer.network().params(), source, target,
                        finetune_iters, cfg, seed);
}

RetentionEntry reverse_transfer_experiment(
    const std::vector<double>& finetuned_params, ScenarioId source,
    ScenarioId target, double direct_copy_baseline_pct,
    const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  QNetwork net;
  if (finetuned_params.size() != static_cast<std::size_t>(QNetwork::param_count())) {
    throw std::runtime_error("fine-tuned parameter vector has the wrong size");
  }
  net.params() = finetuned_params;
  EvaluationReport rep = evaluate(net, source, cfg.eval_episodes, cfg.train.sim,
                                  derive_seed(seed, kReverseEvalStream));
  RetentionEntry entry;
  entry.source = source;
  entry.target = target;
  entry.finetuned_on_source = rep.pct_success;
  entry.direct_copy_baseline = direct_copy_baseline_pct;
  entry.retention_points = rep.pct_success - direct_copy_baseline_pct;
  return entry;
}

void LifelongSchedule::validate() const {
  if (blocks.empty()) throw std::runtime_error("lifelong schedule is empty");
  for (const auto& [task, iters] : blocks) {
    if (iters < 0) throw std::runtime_error("block iterations cannot be negative");
  }
  if (eval_cadence <= 0) throw std::runtime_error("eval_cadence must be positive");
  if (eval_episodes <= 0) throw std::runtime_error("eval_episodes must be positive");
}

LifelongSchedule default_lifelong_schedule(int block_iterations, int eval_cadence,
                                           int eval_episodes) {
  LifelongSchedule s;
  for (ScenarioId id : {ScenarioId::Forward, ScenarioId::Right, ScenarioId::Left,
                        ScenarioId::Left2, ScenarioId::Challenge}) {
    s.blocks.emplace_back(id, block_iterations);
  }
  s.eval_cadence = eval_cadence;
  s.eval_episodes = eval_episodes;
  return s;
}

LifelongResult lifelong_experiment(const LifelongSchedule& schedule,
                                   const TrainConfig& train_cfg,
                                   std::uint64_t seed) {
  schedule.validate();
  TrainConfig cfg = train_cfg;
  cfg.snapshot_every = 0;  // sweeps below replace the on-task curve
  cfg.seed = derive_seed(seed, kLifelongStream);
  cfg.validate();

  LifelongResult result;
  result.schedule = schedule;
  result.peak.fill(0.0);
  result.final.fill(0.0);

  Trainer trainer(schedule.blocks.front().first, cfg);
  std::uint64_t sweep_counter = 0;
  int global_iteration = 0;

  auto sweep = [&](ScenarioId training_task) {
    LifelongPoint pt;
    pt.iteration = global_iteration;
    pt.training_task = training_task;
    for (ScenarioId task : kAllScenarios) {
      EvaluationReport rep = evaluate(
          trainer.network(), task, schedule.eval_episodes, cfg.sim,
          derive_seed(seed, kSweepStreamBase + sweep_counter * 16 +
                                static_cast<std::uint64_t>(task)));
      pt.success[static_cast<int>(task)] = rep.pct_success;
    }
    ++sweep_counter;
    result.points.push_back(pt);
  };

  sweep(schedule.blocks.front().first);
  for (const auto& [task, iterations] : schedule.blocks) {
    trainer.set_task(task);
    int remaining = iterations;
    while (remaining > 0) {
      int chunk = std::min(schedule.eval_cadence, remaining);
      trainer.train_for(chunk);
      global_iteration += chunk;
      remaining -= chunk;
      sweep(task);
    }
  }

  for (int t = 0; t < kScenarioCount; ++t) {
    for (const LifelongPoint& pt : result.points) {
      result.peak[t] = std::max(result.peak[t], pt.success[t]);
    }
    result.final[t] = result.points.back().success[t];
  }
  return result;
}

}  // namespace crossway
