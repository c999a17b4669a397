#include "crossway/tensor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crossway {

std::size_t Tensor::element_count(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) {
      throw std::runtime_error("tensor dimension must be positive, got " +
                               std::to_string(d));
    }
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor Tensor::zeros(std::vector<int> shape) {
  Tensor t;
  std::size_t n = element_count(shape);
  t.shape = std::move(shape);
  t.data.assign(n, 0.0);
  return t;
}

void Tensor::validate() const {
  if (element_count(shape) != data.size()) {
    throw std::runtime_error("tensor shape does not match its value count");
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw std::runtime_error("tensor holds a non-finite value");
    }
  }
}

}  // namespace crossway
