#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "crossway/agent.hpp"
#include "crossway/qnetwork.hpp"
#include "crossway/replay.hpp"
#include "crossway/rmsprop.hpp"
#include "crossway/sim.hpp"

namespace crossway {

struct TrainConfig {
  double epsilon = 0.05;
  double gamma = 0.95;
  int batch_size = kBatchSize;
  int iterations = 2000;
  double learning_rate = kDefaultLearningRate;
  double rms_decay = kDefaultRmsDecay;
  double rms_epsilon = kDefaultRmsEpsilon;
  std::uint64_t seed = 0;
  SimConfig sim;
  // Evaluate on frozen parameters every this many iterations (0 = never).
  // A pre-training point at iteration 0 is always included when enabled.
  int snapshot_every = 0;
  int snapshot_episodes = 200;
  bool split_buffer = false;

  /// Throws std::runtime_error naming the first field out of range.
  void validate() const;
};

struct CurvePoint {
  int iteration = 0;
  ScenarioId task = ScenarioId::Right;
  double mean_loss = 0.0;  // mean batch loss since the previous point
  double success_rate = 0.0;
  double collision_rate = 0.0;
};

// Owns one network, its optimizer, one replay buffer, and the training RNG
// streams. One iteration = one epsilon-greedy episode, return computation,
// buffer insertion, and (once a full batch is stored) one batch update.
class Trainer {
 public:
  /// Fresh random initialization derived from cfg.seed.
  Trainer(ScenarioId task, const TrainConfig& cfg);
  /// Warm start from existing parameters.
  Trainer(ScenarioId task, const TrainConfig& cfg, QNetwork initial);

  /// Runs cfg.iterations more iterations.
  void run() { train_for(cfg_.iterations); }
  void train_for(int iterations);

  /// Switches the training task: the buffer persists, optimizer accumulators
  /// reset, the network continues in place.
  void set_task(ScenarioId task);

  ScenarioId task() const { return task_; }
  const TrainConfig& config() const { return cfg_; }
  const QNetwork& network() const { return net_; }
  QNetwork& network() { return net_; }
  const IReplay& replay() const { return *buffer_; }
  int completed_iterations() const { return iterations_done_; }
  const std::vector<CurvePoint>& curve() const { return curve_; }

  /// Digest over parameters, buffer contents, and RNG streams; anything that
  /// training mutates. Evaluation must leave it unchanged.
  std::uint64_t training_state_digest() const;

 private:
  void record_snapshot();

  TrainConfig cfg_;
  ScenarioId task_;
  QNetwork net_;
  RmsProp opt_;
  std::unique_ptr<IReplay> buffer_;
  Rng explore_rng_;
  Rng sample_rng_;
  std::uint64_t episode_counter_ = 0;
  std::uint64_t snapshot_counter_ = 0;
  int iterations_done_ = 0;
  double loss_accum_ = 0.0;
  int loss_count_ = 0;
  std::vector<CurvePoint> curve_;
};

}  // namespace crossway
