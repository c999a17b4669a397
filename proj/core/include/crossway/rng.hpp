#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "crossway/hash.hpp"

namespace crossway {

// splitmix64 step; used to derive independent seed streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ull * (stream + 1));
  return splitmix64(s);
}

// Deterministic RNG wrapper. Doubles are produced from raw engine bits with a
// fixed 53-bit construction so sequences are identical across platforms and
// standard-library implementations (std::uniform_real_distribution is not
// portable). Tracks the number of draws for state-purity checks.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); unbiased via rejection sampling.
  std::size_t uniform_index(std::size_t n) {
    if (n <= 1) {
      if (n == 1) next_u64();  // keep the stream layout independent of n
      return 0;
    }
    const std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<std::size_t>(x % n);
  }

  std::uint64_t draw_count() const { return draws_; }

  // Digest of the full engine state plus draw counter.
  std::uint64_t state_digest() const {
    std::ostringstream os;
    os << engine_ << ' ' << draws_;
    return fnv1a64(os.str());
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace crossway
