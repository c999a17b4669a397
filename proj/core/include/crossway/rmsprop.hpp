#pragma once

#include <cstddef>
#include <vector>

namespace crossway {

inline constexpr double kDefaultLearningRate = 1e-3;
inline constexpr double kDefaultRmsDecay = 0.95;
inline constexpr double kDefaultRmsEpsilon = 1e-6;

// Root-mean-square gradient scaling: each parameter keeps a decayed average
// of its squared gradients and steps inversely to its magnitude.
class RmsProp {
 public:
  explicit RmsProp(std::size_t n, double learning_rate = kDefaultLearningRate,
                   double decay = kDefaultRmsDecay,
                   double epsilon = kDefaultRmsEpsilon);

  /// acc <- decay * acc + (1 - decay) * g^2
  /// p   <- p - learning_rate * g / (sqrt(acc) + epsilon)
  /// Throws std::runtime_error on size mismatch or non-finite gradients.
  void update(std::vector<double>& params, const std::vector<double>& grads);

  /// Zeroes the accumulator (used when switching tasks mid-run).
  void reset();

  const std::vector<double>& accumulator() const { return acc_; }
  double learning_rate() const { return learning_rate_; }
  double decay() const { return decay_; }
  double epsilon() const { return epsilon_; }

 private:
  double learning_rate_;
  double decay_;
  double epsilon_;
  std::vector<double> acc_;
};

}  // namespace crossway
