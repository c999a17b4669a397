#pragma once

#include <vector>

namespace crossway {

// Row-major value block with an explicit shape. Used as the in-memory form
// of checkpoints and as scratch in tests; the network hot paths work on raw
// flat arrays instead.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  static Tensor zeros(std::vector<int> shape);

  std::size_t size() const { return data.size(); }

  /// Product of the shape entries. Throws std::runtime_error on a
  /// non-positive dimension.
  static std::size_t element_count(const std::vector<int>& shape);

  /// Throws std::runtime_error when shape and data disagree or any value is
  /// non-finite.
  void validate() const;
};

}  // namespace crossway
