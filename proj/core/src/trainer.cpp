#include "crossway/trainer.hpp"

#include <stdexcept>

#include "crossway/evaluate.hpp"
#include "crossway/hash.hpp"

namespace crossway {

namespace {

// Stream tags for seeds derived from the master training seed.
constexpr int kInitStream = 13;
constexpr int kExploreStream = 11;
constexpr int kSampleStream = 12;
constexpr int kBufferStream = 14;
constexpr std::uint64_t kEpisodeStreamBase = 1u << 20;
constexpr std::uint64_t kSnapshotStreamBase = 1u << 30;

std::unique_ptr<IReplay> make_buffer(const TrainConfig& cfg) {
  if (cfg.split_buffer) {
    return std::make_unique<SplitReplayBuffer>(
        kSelectiveCapacity, kFifoCapacity, nullptr,
        derive_seed(cfg.seed, kBufferStream));
  }
  return std::make_unique<ReplayBuffer>(kReplayCapacity);
}

QNetwork fresh_network(const TrainConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, kInitStream));
  return QNetwork::random_init(rng);
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::runtime_error("train config: " + what);
  };
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must be in [0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (batch_size <= 0) fail("batch_size must be positive");
  if (static_cast<std::size_t>(batch_size) > kReplayCapacity) {
    fail("batch_size cannot exceed the replay capacity");
  }
  if (split_buffer && batch_size % 2 != 0) {
    fail("batch_size must be even with the split buffer");
  }
  if (iterations < 0) fail("iterations cannot be negative");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(rms_decay >= 0.0 && rms_decay < 1.0)) fail("rms_decay must be in [0, 1)");
  if (!(rms_epsilon > 0.0)) fail("rms_epsilon must be positive");
  if (snapshot_every < 0) fail("snapshot_every cannot be negative");
  if (snapshot_every > 0 && snapshot_episodes <= 0) {
    fail("snapshot_episodes must be positive");
  }
  sim.validate();
}

Trainer::Trainer(ScenarioId task, const TrainConfig& cfg)
    : Trainer(task, cfg, fresh_network(cfg)) {}

Trainer::Trainer(ScenarioId task, const TrainConfig& cfg, QNetwork initial)
    : cfg_(cfg),
      task_(task),
      net_(std::move(initial)),
      opt_(QNetwork::param_count(), cfg.learning_rate, cfg.rms_decay,
           cfg.rms_epsilon),
      buffer_(make_buffer(cfg)),
      explore_rng_(derive_seed(cfg.seed, kExploreStream)),
      sample_rng_(derive_seed(cfg.seed, kSampleStream)) {
  cfg_.validate();
}

void Trainer::record_snapshot() {
  EvaluationReport rep =
      evaluate(net_, task_, cfg_.snapshot_episodes, cfg_.sim,
               derive_seed(cfg_.seed, kSnapshotStreamBase + snapshot_counter_));
  ++snapshot_counter_;
  CurvePoint pt;
  pt.iteration = iterations_done_;
  pt.task = task_;
  pt.mean_loss = loss_count_ > 0 ? loss_accum_ / loss_count_ : 0.0;
  pt.success_rate = rep.pct_success;
  pt.collision_rate = rep.pct_collision;
  curve_.push_back(pt);
  loss_accum_ = 0.0;
  loss_count_ = 0;
}

void Trainer::train_for(int iterations) {
  if (iterations < 0) throw std::runtime_error("iterations cannot be negative");
  if (cfg_.snapshot_every > 0 && curve_.empty()) {
    record_snapshot();  // pre-training point
  }
  for (int i = 0; i < iterations; ++i) {
    std::uint64_t episode_seed =
        derive_seed(cfg_.seed, kEpisodeStreamBase + episode_counter_);
    ++episode_counter_;
    AgentEpisode ep = run_agent_episode(net_, task_, cfg_.sim, cfg_.epsilon,
                                        episode_seed, &explore_rng_);
    for (Experience& e : compute_returns(ep.trajectory, cfg_.gamma)) {
      buffer_->push(std::move(e));
    }
    if (buffer_->ready(cfg_.batch_size)) {
      double loss =
          train_step(net_, opt_, buffer_->sample(cfg_.batch_size, sample_rng_));
      loss_accum_ += loss;
      ++loss_count_;
    }
    ++iterations_done_;
    if (cfg_.snapshot_every > 0 && iterations_done_ % cfg_.snapshot_every == 0) {
      record_snapshot();
    }
  }
}

void Trainer::set_task(ScenarioId task) {
  task_ = task;
  opt_.reset();
}

std::uint64_t Trainer::training_state_digest() const {
  std::uint64_t h =
      fnv1a64(std::span<const double>(net_.params().data(), net_.params().size()));
  h ^= buffer_->content_digest();
  h ^= explore_rng_.state_digest() * 0x9e3779b97f4a7c15ull;
  h ^= sample_rng_.state_digest() * 0xbf58476d1ce4e5b9ull;
  double counters[2] = {static_cast<double>(episode_counter_),
                        static_cast<double>(iterations_done_)};
  return fnv1a64(std::span<const double>(counters, 2), h);
}

}  // namespace crossway
