#include "crossway/qnetwork.hpp"

#include <cmath>
#include <stdexcept>

#include "crossway/hash.hpp"

namespace crossway {

namespace {

// Initial output weights are kept tiny so untrained action values start near
// zero, the scale of the reward signal.
constexpr double kOutputInitLimit = 1e-3;

std::uint64_t grid_digest(const OccupancyGrid& g) {
  return fnv1a64(std::span<const double>(g.data.data(), g.data.size()));
}

}  // namespace

QNetwork::QNetwork() : params_(kQNetParamCount, 0.0) {}

QNetwork QNetwork::random_init(Rng& rng) {
  QNetwork net;
  auto fill = [&](int offset, int count, double limit) {
    for (int i = 0; i < count; ++i) {
      net.params_[offset + i] = rng.uniform(-limit, limit);
    }
  };
  auto fan_in_limit = [](int fan_in) { return std::sqrt(6.0 / fan_in); };
  fill(kQNetLayout.conv1_w, kConv1.weight_count(),
       fan_in_limit(kConv1.kernel * kConv1.kernel * kConv1.in_c));
  fill(kQNetLayout.conv2_w, kConv2.weight_count(),
       fan_in_limit(kConv2.kernel * kConv2.kernel * kConv2.in_c));
  fill(kQNetLayout.dense_w, kDenseUnits * kFlatUnits, fan_in_limit(kFlatUnits));
  fill(kQNetLayout.out_w, kNumActions * kDenseUnits, kOutputInitLimit);
  return net;
}

std::array<double, kNumActions> QNetwork::forward(const OccupancyGrid& input,
                                                  Cache* cache) const {
  Cache local;
  Cache& c = cache != nullptr ? *cache : local;
  c.conv1_pre.resize(kConv1.out_count());
  c.conv1_post.resize(kConv1.out_count());
  c.conv2_pre.resize(kConv2.out_count());
  c.conv2_post.resize(kConv2.out_count());
  c.dense_pre.resize(kDenseUnits);
  c.dense_post.resize(kDenseUnits);

  const double* p = params_.data();
  conv_forward(kConv1, input.data.data(), p + kQNetLayout.conv1_w,
               p + kQNetLayout.conv1_b, c.conv1_pre.data());
  leaky_relu_forward(kConv1.out_count(), kLeakySlope, c.conv1_pre.data(),
                     c.conv1_post.data());
  conv_forward(kConv2, c.conv1_post.data(), p + kQNetLayout.conv2_w,
               p + kQNetLayout.conv2_b, c.conv2_pre.data());
  leaky_relu_forward(kConv2.out_count(), kLeakySlope, c.conv2_pre.data(),
                     c.conv2_post.data());
  dense_forward(kFlatUnits, kDenseUnits, c.conv2_post.data(),
                p + kQNetLayout.dense_w, p + kQNetLayout.dense_b,
                c.dense_pre.data());
  leaky_relu_forward(kDenseUnits, kLeakySlope, c.dense_pre.data(),
                     c.dense_post.data());

  std::array<double, kNumActions> q;
  dense_forward(kDenseUnits, kNumActions, c.dense_post.data(),
                p + kQNetLayout.out_w, p + kQNetLayout.out_b, q.data());
  c.input_digest = grid_digest(input);
  c.valid = true;
  return q;
}

void QNetwork::backward(const OccupancyGrid& input, const Cache& cache,
                        const std::array<double, kNumActions>& dq,
                        std::vector<double>& grads) const {
  if (!cache.valid || cache.input_digest != grid_digest(input)) {
    throw std::logic_error("backward() called with a cache from a different input");
  }
  if (grads.size() != params_.size()) {
    throw std::runtime_error("gradient buffer size mismatch");
  }
  const double* p = params_.data();
  double* g = grads.data();

  std::vector<double> d_dense_post(kDenseUnits, 0.0);
  dense_backward(kDenseUnits, kNumActions, cache.dense_post.data(),
                 p + kQNetLayout.out_w, dq.data(), d_dense_post.data(),
                 g + kQNetLayout.out_w, g + kQNetLayout.out_b);

  std::vector<double> d_dense_pre(kDenseUnits, 0.0);
  leaky_relu_backward(kDenseUnits, kLeakySlope, cache.dense_pre.data(),
                      d_dense_post.data(), d_dense_pre.data());

  std::vector<double> d_conv2_post(kFlatUnits, 0.0);
  dense_backward(kFlatUnits, kDenseUnits, cache.conv2_post.data(),
                 p + kQNetLayout.dense_w, d_dense_pre.data(), d_conv2_post.data(),
                 g + kQNetLayout.dense_w, g + kQNetLayout.dense_b);

  std::vector<double> d_conv2_pre(kConv2.out_count(), 0.0);
  leaky_relu_backward(kConv2.out_count(), kLeakySlope, cache.conv2_pre.data(),
                      d_conv2_post.data(), d_conv2_pre.data());

  std::vector<double> d_conv1_post(kConv1.out_count(), 0.0);
  conv_backward(kConv2, cache.conv1_post.data(), p + kQNetLayout.conv2_w,
                d_conv2_pre.data(), d_conv1_post.data(), g + kQNetLayout.conv2_w,
                g + kQNetLayout.conv2_b);

  std::vector<double> d_conv1_pre(kConv1.out_count(), 0.0);
  leaky_relu_backward(kConv1.out_count(), kLeakySlope, cache.conv1_pre.data(),
                      d_conv1_post.data(), d_conv1_pre.data());

  conv_backward(kConv1, input.data.data(), p + kQNetLayout.conv1_w,
                d_conv1_pre.data(), nullptr, g + kQNetLayout.conv1_w,
                g + kQNetLayout.conv1_b);
}

}  // namespace crossway
