#pragma once

#include <cstdint>
#include <vector>

#include "crossway/qnetwork.hpp"
#include "crossway/rng.hpp"

namespace crossway {

// Plain dense network with the same conventions as QNetwork (flat parameter
// vector, leaky hidden layers, linear output, accumulate-mode backward).
// Used by the tabular-scale training oracles and as a small gradient-check
// subject; shares train_step and the optimizer with the big network.
class MlpNetwork {
 public:
  /// layer_sizes = {inputs, hidden..., outputs}; at least two entries.
  /// Parameters start at zero.
  explicit MlpNetwork(std::vector<int> layer_sizes,
                      double leaky_slope = kLeakySlope);

  static MlpNetwork random_init(std::vector<int> layer_sizes, Rng& rng,
                                double leaky_slope = kLeakySlope);

  int param_count() const { return static_cast<int>(params_.size()); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  struct Cache {
    std::vector<std::vector<double>> pre;   // preactivations per layer
    std::vector<std::vector<double>> post;  // activated outputs per layer
    std::uint64_t input_digest = 0;
    bool valid = false;
  };

  /// Throws std::runtime_error when the input size disagrees with the layout.
  std::vector<double> forward(const std::vector<double>& input,
                              Cache* cache = nullptr) const;

  /// Accumulates into grads; throws std::logic_error on a cache/input
  /// mismatch.
  void backward(const std::vector<double>& input, const Cache& cache,
                const std::vector<double>& dout,
                std::vector<double>& grads) const;

 private:
  std::vector<int> sizes_;
  double leaky_slope_;
  std::vector<double> params_;
  std::vector<int> w_offsets_;  // per layer
  std::vector<int> b_offsets_;
};

}  // namespace crossway
