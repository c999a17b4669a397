#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "crossway/grid.hpp"
#include "crossway/layers.hpp"
#include "crossway/rng.hpp"

namespace crossway {

inline constexpr int kNumActions = 5;
inline constexpr double kLeakySlope = 0.01;

// conv 32@6x6/2 -> conv 64@3x3/2 -> dense 100 -> linear 5, leaky ReLU after
// every layer but the last. Input is the 18x26x3 grid.
inline constexpr ConvShape kConv1{kGridRows, kGridCols, kGridChannels, 6, 2, 32};
inline constexpr ConvShape kConv2{kConv1.out_h(), kConv1.out_w(), kConv1.filters, 3,
                                  2, 64};
inline constexpr int kFlatUnits = kConv2.out_h() * kConv2.out_w() * kConv2.filters;
inline constexpr int kDenseUnits = 100;

// Flat parameter layout: conv1 w|b, conv2 w|b, dense w|b, output w|b.
struct QNetLayout {
  int conv1_w = 0;
  int conv1_b = conv1_w + kConv1.weight_count();
  int conv2_w = conv1_b + kConv1.filters;
  int conv2_b = conv2_w + kConv2.weight_count();
  int dense_w = conv2_b + kConv2.filters;
  int dense_b = dense_w + kDenseUnits * kFlatUnits;
  int out_w = dense_b + kDenseUnits;
  int out_b = out_w + kNumActions * kDenseUnits;
  int total = out_b + kNumActions;
};

inline constexpr QNetLayout kQNetLayout{};
inline constexpr int kQNetParamCount = kQNetLayout.total;

// The action-value network. Parameters live in one flat vector so the
// optimizer, checkpoints, and gradient buffers all share a single layout.
class QNetwork {
 public:
  /// All-zero parameters.
  QNetwork();

  /// Fan-in-scaled uniform weights on the hidden layers, a small uniform
  /// output layer (initial action values near zero), zero biases.
  static QNetwork random_init(Rng& rng);

  static constexpr int param_count() { return kQNetParamCount; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  struct Cache {
    std::vector<double> conv1_pre, conv1_post;
    std::vector<double> conv2_pre, conv2_post;
    std::vector<double> dense_pre, dense_post;
    std::uint64_t input_digest = 0;
    bool valid = false;
  };

  /// Action values for one grid. Fills *cache for a later backward pass when
  /// given.
  std::array<double, kNumActions> forward(const OccupancyGrid& input,
                                          Cache* cache = nullptr) const;

  /// Accumulates d(loss)/d(params) into grads (size param_count()) given
  /// d(loss)/d(q). Throws std::logic_error when the cache does not belong to
  /// this input.
  void backward(const OccupancyGrid& input, const Cache& cache,
                const std::array<double, kNumActions>& dq,
                std::vector<double>& grads) const;

 private:
  std::vector<double> params_;
};

}  // namespace crossway
