#include "crossway/rmsprop.hpp"

#include <cmath>
#include <stdexcept>

namespace crossway {

RmsProp::RmsProp(std::size_t n, double learning_rate, double decay, double epsilon)
    : learning_rate_(learning_rate), decay_(decay), epsilon_(epsilon), acc_(n, 0.0) {
  if (n == 0) throw std::runtime_error("optimizer needs at least one parameter");
  if (!(learning_rate > 0.0)) throw std::runtime_error("learning rate must be positive");
  if (!(decay >= 0.0 && decay < 1.0)) throw std::runtime_error("decay must be in [0, 1)");
  if (!(epsilon > 0.0)) throw std::runtime_error("epsilon must be positive");
}

void RmsProp::update(std::vector<double>& params, const std::vector<double>& grads) {
  if (params.size() != acc_.size() || grads.size() != acc_.size()) {
    throw std::runtime_error("optimizer/parameter size mismatch");
  }
  for (std::size_t i = 0; i < acc_.size(); ++i) {
    double g = grads[i];
    if (!std::isfinite(g)) {
      throw std::runtime_error("non-finite gradient in optimizer update");
    }
    acc_[i] = decay_ * acc_[i] + (1.0 - decay_) * g * g;
    params[i] -= learning_rate_ * g / (std::sqrt(acc_[i]) + epsilon_);
  }
}

void RmsProp::reset() { acc_.assign(acc_.size(), 0.0); }

}  // namespace crossway
