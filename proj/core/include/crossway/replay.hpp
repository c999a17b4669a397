#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "crossway/grid.hpp"
#include "crossway/rng.hpp"

namespace crossway {

inline constexpr std::size_t kReplayCapacity = 1000;
inline constexpr int kBatchSize = 60;
inline constexpr std::size_t kSelectiveCapacity = 900;
inline constexpr std::size_t kFifoCapacity = 100;
inline constexpr int kSplitBatchPart = 30;

// One stored decision with its full-episode discounted return as the
// training target.
struct Experience {
  OccupancyGrid state;
  int action = 0;
  double target_return = 0.0;
};

class IReplay {
 public:
  virtual ~IReplay() = default;

  virtual void push(Experience e) = 0;
  /// True once enough experiences are stored for one batch of n.
  virtual bool ready(int n) const = 0;
  /// n distinct storage slots, uniform within each underlying part.
  /// Requires ready(n).
  virtual std::vector<const Experience*> sample(int n, Rng& rng) const = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t capacity() const = 0;
  /// Order-sensitive digest over the stored contents, for purity checks.
  virtual std::uint64_t content_digest() const = 0;
};

// Plain ring: strictly oldest-first eviction beyond the capacity.
class ReplayBuffer : public IReplay {
 public:
  explicit ReplayBuffer(std::size_t capacity = kReplayCapacity);

  void push(Experience e) override;
  bool ready(int n) const override;
  std::vector<const Experience*> sample(int n, Rng& rng) const override;
  std::size_t size() const override { return slots_.size(); }
  std::size_t capacity() const override { return capacity_; }
  std::uint64_t content_digest() const override;

  /// Slot contents in storage order (oldest is not necessarily index 0).
  const std::vector<Experience>& slots() const { return slots_; }

 private:
  std::size_t capacity_;
  std::size_t write_ = 0;  // next slot to overwrite once full
  std::vector<Experience> slots_;
};

// Decides which slot of a full selective buffer an incoming experience
// replaces, or that it is dropped.
class SelectionStrategy {
 public:
  virtual ~SelectionStrategy() = default;
  /// seen_count counts every experience offered so far, including this one.
  /// Returns a slot in [0, capacity) to replace, or -1 to drop the incoming
  /// experience.
  virtual int select_slot(std::size_t capacity, std::uint64_t seen_count,
                          const Experience& incoming, Rng& rng) = 0;
};

// Uniform reservoir over the whole experience stream: item n is kept with
// probability capacity/n in a uniformly chosen slot. Draws exactly two
// uniforms per offer so the stream layout never depends on outcomes.
class ReservoirSelection : public SelectionStrategy {
 public:
  int select_slot(std::size_t capacity, std::uint64_t seen_count,
                  const Experience& incoming, Rng& rng) override;
};

// Two-part buffer: a 900-slot selective part sampling the whole history and
// a 100-slot recency ring; batches draw 30 from each part. Every pushed
// experience enters the ring and is offered to the selective part.
class SplitReplayBuffer : public IReplay {
 public:
  SplitReplayBuffer(std::size_t selective_capacity = kSelectiveCapacity,
                    std::size_t fifo_capacity = kFifoCapacity,
                    std::unique_ptr<SelectionStrategy> strategy = nullptr,
                    std::uint64_t seed = 0);

  void push(Experience e) override;
  bool ready(int n) const override;
  /// n must be even; draws n/2 experiences from each part.
  std::vector<const Experience*> sample(int n, Rng& rng) const override;
  std::size_t size() const override;
  std::size_t capacity() const override;
  std::uint64_t content_digest() const override;

  const ReplayBuffer& fifo_part() const { return fifo_; }
  std::size_t selective_size() const { return selective_.size(); }

 private:
  std::size_t selective_capacity_;
  std::vector<Experience> selective_;
  ReplayBuffer fifo_;
  std::unique_ptr<SelectionStrategy> strategy_;
  std::uint64_t seen_ = 0;
  Rng strategy_rng_;
};

}  // namespace crossway
