#include "crossway/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "crossway/hash.hpp"
#include "crossway/layers.hpp"

namespace crossway {

MlpNetwork::MlpNetwork(std::vector<int> layer_sizes, double leaky_slope)
    : sizes_(std::move(layer_sizes)), leaky_slope_(leaky_slope) {
  if (sizes_.size() < 2) {
    throw std::runtime_error("network needs an input and an output layer");
  }
  int total = 0;
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    if (sizes_[l - 1] <= 0 || sizes_[l] <= 0) {
      throw std::runtime_error("layer sizes must be positive");
    }
    w_offsets_.push_back(total);
    total += sizes_[l] * sizes_[l - 1];
    b_offsets_.push_back(total);
    total += sizes_[l];
  }
  params_.assign(total, 0.0);
}

MlpNetwork MlpNetwork::random_init(std::vector<int> layer_sizes, Rng& rng,
                                   double leaky_slope) {
  MlpNetwork net(std::move(layer_sizes), leaky_slope);
  for (std::size_t l = 1; l < net.sizes_.size(); ++l) {
    double limit = std::sqrt(6.0 / net.sizes_[l - 1]);
    int w0 = net.w_offsets_[l - 1];
    int count = net.sizes_[l] * net.sizes_[l - 1];
    for (int i = 0; i < count; ++i) net.params_[w0 + i] = rng.uniform(-limit, limit);
  }
  return net;
}

std::vector<double> MlpNetwork::forward(const std::vector<double>& input,
                                        Cache* cache) const {
  if (static_cast<int>(input.size()) != sizes_.front()) {
    throw std::runtime_error("input size " + std::to_string(input.size()) +
                             " does not match network input " +
                             std::to_string(sizes_.front()));
  }
  Cache local;
  Cache& c = cache != nullptr ? *cache : local;
  std::size_t layers = sizes_.size() - 1;
  c.pre.assign(layers, {});
  c.post.assign(layers, {});

  const std::vector<double>* x = &input;
  for (std::size_t l = 0; l < layers; ++l) {
    int in_n = sizes_[l];
    int out_n = sizes_[l + 1];
    c.pre[l].assign(out_n, 0.0);
    dense_forward(in_n, out_n, x->data(), params_.data() + w_offsets_[l],
                  params_.data() + b_offsets_[l], c.pre[l].data());
    if (l + 1 < layers) {
      c.post[l].assign(out_n, 0.0);
      leaky_relu_forward(out_n, leaky_slope_, c.pre[l].data(), c.post[l].data());
    } else {
      c.post[l] = c.pre[l];  // linear output layer
    }
    x = &c.post[l];
  }
  c.input_digest = fnv1a64(std::span<const double>(input.data(), input.size()));
  c.valid = true;
  return c.post.back();
}

void MlpNetwork::backward(const std::vector<double>& input, const Cache& cache,
                          const std::vector<double>& dout,
                          std::vector<double>& grads) const {
  if (!cache.valid ||
      cache.input_digest !=
          fnv1a64(std::span<const double>(input.data(), input.size()))) {
    throw std::logic_error("backward() called with a cache from a different input");
  }
  if (grads.size() != params_.size()) {
    throw std::runtime_error("gradient buffer size mismatch");
  }
  std::size_t layers = sizes_.size() - 1;
  if (dout.size() != static_cast<std::size_t>(sizes_.back())) {
    throw std::runtime_error("output gradient size mismatch");
  }

  std::vector<double> d_post = dout;
  for (std::size_t l = layers; l-- > 0;) {
    int in_n = sizes_[l];
    int out_n = sizes_[l + 1];
    std::vector<double> d_pre;
    if (l + 1 < layers) {
      d_pre.assign(out_n, 0.0);
      leaky_relu_backward(out_n, leaky_slope_, cache.pre[l].data(), d_post.data(),
                          d_pre.data());
    } else {
      d_pre = d_post;  // linear output layer
    }
    const double* in = (l == 0) ? input.data() : cache.post[l - 1].data();
    std::vector<double> d_in(in_n, 0.0);
    dense_backward(in_n, out_n, in, params_.data() + w_offsets_[l], d_pre.data(),
                   l == 0 ? nullptr : d_in.data(), grads.data() + w_offsets_[l],
                   grads.data() + b_offsets_[l]);
    d_post = std::move(d_in);
  }
}

}  // namespace crossway
