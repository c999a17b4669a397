#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "crossway/evaluate.hpp"
#include "crossway/trainer.hpp"

namespace crossway {

/// Runs fn(0..n-1) across up to max_threads worker threads (0 = hardware
/// count). Work items must be independent; the first exception is rethrown
/// after all workers finish.
void parallel_for(int n, const std::function<void(int)>& fn, int max_threads = 0);

struct ExperimentConfig {
  TrainConfig train;  // per-task training budget and hyperparameters
  std::vector<ScenarioId> tasks{kAllScenarios.begin(), kAllScenarios.end()};
  int eval_episodes = 500;
  int seeds = 1;
  std::uint64_t master_seed = 0;
  int max_threads = 0;

  void validate() const;
};

// Evaluation reports over (training task, evaluation task) pairs.
struct TransferMatrix {
  std::vector<ScenarioId> tasks;
  std::vector<std::vector<EvaluationReport>> cells;  // [train index][eval index]

  const EvaluationReport& at(ScenarioId trained_on, ScenarioId evaluated_on) const;
};

// One full direct-copy pass for one seed: a network per task, evaluated on
// every task.
struct DirectCopyRun {
  std::uint64_t seed = 0;
  TransferMatrix matrix;
  std::vector<std::vector<double>> trained_params;   // [task index]
  std::vector<std::vector<CurvePoint>> curves;       // [task index]
};

DirectCopyRun direct_copy_experiment(const ExperimentConfig& cfg, std::uint64_t seed);
/// cfg.seeds runs with per-run seeds derived from cfg.master_seed.
std::vector<DirectCopyRun> direct_copy_sweep(const ExperimentConfig& cfg);

// Paired learning curves on the target task: one branch warm-started from a
// source-trained network, one from a fresh random initialization.
struct FineTuneResult {
  ScenarioId source = ScenarioId::Right;
  ScenarioId target = ScenarioId::Right;
  std::vector<CurvePoint> pretrained_curve;
  std::vector<CurvePoint> fresh_curve;
  std::vector<double> finetuned_params;  // warm branch after fine-tuning
  std::vector<double> fresh_params;      // scratch branch after the same budget
};

/// Trains the source network from scratch first (pretrain_iters), then
/// fine-tunes. Curves carry an evaluation at iteration 0, the jumpstart
/// comparison point.
FineTuneResult fine_tune_experiment(ScenarioId source, ScenarioId target,
                                    int pretrain_iters, int finetune_iters,
                                    const ExperimentConfig& cfg,
                                    std::uint64_t seed);

/// Same, warm-starting from already-trained source parameters (reuses
/// direct-copy checkpoints).
FineTuneResult fine_tune_from(const std::vector<double>& source_params,
                              ScenarioId source, ScenarioId target,
                              int finetune_iters, const ExperimentConfig& cfg,
                              std::uint64_t seed);

// How much source skill survives fine-tuning on the target, in percentage
// points above the direct-copy baseline (the target-trained network's success
// on the source task).
struct RetentionEntry {
  ScenarioId source = ScenarioId::Right;
  ScenarioId target = ScenarioId::Right;
  double finetuned_on_source = 0.0;
  double direct_copy_baseline = 0.0;
  double retention_points = 0.0;
};

RetentionEntry reverse_transfer_experiment(
    const std::vector<double>& finetuned_params, ScenarioId source,
    ScenarioId target, double direct_copy_baseline_pct,
    const ExperimentConfig& cfg, std::uint64_t seed);

struct LifelongSchedule {
  std::vector<std::pair<ScenarioId, int>> blocks;  // (task, iterations)
  int eval_cadence = 250;   // iterations between five-task test sweeps
  int eval_episodes = 200;  // episodes per task per sweep

  void validate() const;
};

/// Forward first, then Right, Left, Left2, Challenge.
LifelongSchedule default_lifelong_schedule(int block_iterations,
                                           int eval_cadence = 250,
                                           int eval_episodes = 200);

struct LifelongPoint {
  int iteration = 0;                 // cumulative over the whole schedule
  ScenarioId training_task = ScenarioId::Forward;
  std::array<double, kScenarioCount> success{};  // per-task %, indexed by id
};

struct LifelongResult {
  LifelongSchedule schedule;
  std::vector<LifelongPoint> points;              // includes iteration 0
  std::array<double, kScenarioCount> peak{};      // per-task within-run peak
  std::array<double, kScenarioCount> final{};     // per-task last sweep
};

/// One network and one replay buffer persist across every block; optimizer
/// accumulators reset at each task switch. All five tasks are evaluated on
/// frozen parameters at iteration 0, every eval_cadence iterations, and at
/// the end of every block.
LifelongResult lifelong_experiment(const LifelongSchedule& schedule,
                                   const TrainConfig& train_cfg,
                                   std::uint64_t seed);

}  // namespace crossway
