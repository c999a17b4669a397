#include "crossway/replay.hpp"

#include <numeric>
#include <stdexcept>

#include "crossway/hash.hpp"

namespace crossway {

namespace {

std::uint64_t experience_digest(const Experience& e, std::uint64_t h) {
  h = fnv1a64(std::span<const double>(e.state.data.data(), e.state.data.size()), h);
  double fields[2] = {static_cast<double>(e.action), e.target_return};
  return fnv1a64(std::span<const double>(fields, 2), h);
}

// Partial Fisher-Yates: n distinct indices out of [0, pool).
std::vector<std::size_t> distinct_indices(std::size_t pool, int n, Rng& rng) {
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (int i = 0; i < n; ++i) {
    std::size_t j = i + rng.uniform_index(pool - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::runtime_error("replay capacity must be positive");
  slots_.reserve(capacity);
}

void ReplayBuffer::push(Experience e) {
  if (slots_.size() < capacity_) {
    slots_.push_back(std::move(e));
  } else {
    slots_[write_] = std::move(e);
    write_ = (write_ + 1) % capacity_;
  }
}

bool ReplayBuffer::ready(int n) const {
  return n > 0 && slots_.size() >= static_cast<std::size_t>(n);
}

std::vector<const Experience*> ReplayBuffer::sample(int n, Rng& rng) const {
  if (!ready(n)) throw std::runtime_error("replay buffer holds fewer than one batch");
  std::vector<const Experience*> out;
  out.reserve(n);
  for (std::size_t i : distinct_indices(slots_.size(), n, rng)) {
    out.push_back(&slots_[i]);
  }
  return out;
}

std::uint64_t ReplayBuffer::content_digest() const {
  std::uint64_t h = fnv1a64(std::string_view("fifo"));
  // Walk in insertion (oldest-first) order so the digest pins FIFO behavior.
  std::size_t start = slots_.size() < capacity_ ? 0 : write_;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    h = experience_digest(slots_[(start + i) % slots_.size()], h);
  }
  return h;
}

int ReservoirSelection::select_slot(std::size_t capacity, std::uint64_t seen_count,
                                    const Experience& incoming, Rng& rng) {
  (void)incoming;
  // Fixed draw pattern: acceptance test first, slot second.
  double u = rng.uniform();
  std::size_t slot = rng.uniform_index(capacity);
  double keep_probability =
      static_cast<double>(capacity) / static_cast<double>(seen_count);
  if (u < keep_probability) return static_cast<int>(slot);
  return -1;
}

SplitReplayBuffer::SplitReplayBuffer(std::size_t selective_capacity,
                                     std::size_t fifo_capacity,
                                     std::unique_ptr<SelectionStrategy> strategy,
                                     std::uint64_t seed)
    : selective_capacity_(selective_capacity),
      fifo_(fifo_capacity),
      strategy_(strategy ? std::move(strategy)
                         : std::make_unique<ReservoirSelection>()),
      strategy_rng_(derive_seed(seed, 97)) {
  if (selective_capacity == 0) {
    throw std::runtime_error("selective capacity must be positive");
  }
  selective_.reserve(selective_capacity);
}

void SplitReplayBuffer::push(Experience e) {
  ++seen_;
  if (selective_.size() < selective_capacity_) {
    selective_.push_back(e);
  } else {
    int slot = strategy_->select_slot(selective_capacity_, seen_, e, strategy_rng_);
    if (slot >= 0) {
      if (static_cast<std::size_t>(slot) >= selective_capacity_) {
        throw std::logic_error("selection strategy returned an out-of-range slot");
      }
      selective_[slot] = e;
    }
  }
  fifo_.push(std::move(e));
}

bool SplitReplayBuffer::ready(int n) const {
  if (n <= 0 || n % 2 != 0) return false;
  std::size_t half = static_cast<std::size_t>(n) / 2;
  return selective_.size() >= half && fifo_.size() >= half;
}

std::vector<const Experience*> SplitReplayBuffer::sample(int n, Rng& rng) const {
  if (n % 2 != 0) {
    throw std::runtime_error("split buffer batches must be even (half per part)");
  }
  if (!ready(n)) {
    throw std::runtime_error("split buffer parts hold fewer than one half-batch");
  }
  int half = n / 2;
  std::vector<const Experience*> out;
  out.reserve(n);
  for (std::size_t i : distinct_indices(selective_.size(), half, rng)) {
    out.push_back(&selective_[i]);
  }
  for (const Experience* e : fifo_.sample(half, rng)) out.push_back(e);
  return out;
}

std::size_t SplitReplayBuffer::size() const { return selective_.size() + fifo_.size(); }

std::size_t SplitReplayBuffer::capacity() const {
  return selective_capacity_ + fifo_.capacity();
}

std::uint64_t SplitReplayBuffer::content_digest() const {
  std::uint64_t h = fnv1a64(std::string_view("selective"));
  for (const Experience& e : selective_) h = experience_digest(e, h);
  double counters[1] = {static_cast<double>(seen_)};
  h = fnv1a64(std::span<const double>(counters, 1), h);
  return h ^ fifo_.content_digest() ^ strategy_rng_.state_digest();
}

}  // namespace crossway
