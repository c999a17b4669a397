#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "crossway/qnetwork.hpp"
#include "crossway/tensor.hpp"

namespace crossway {

// Checkpoint files: 8-byte magic "CWCKPT\0\0", then little-endian u32
// format version, u32 rank, rank x u32 dims, u64 value count (= product of
// dims), and the values as little-endian IEEE-754 doubles. Full precision on
// disk keeps save/load/forward round trips bit-exact.

struct CheckpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Bad magic, malformed header, trailing bytes, or non-finite values.
struct FormatError : CheckpointError {
  using CheckpointError::CheckpointError;
};
/// Understood file, unsupported format version.
struct VersionError : CheckpointError {
  using CheckpointError::CheckpointError;
};
/// Valid file whose shape disagrees with what the caller expects.
struct ShapeError : CheckpointError {
  using CheckpointError::CheckpointError;
};
/// File ends before the header or payload is complete.
struct TruncatedError : CheckpointError {
  using CheckpointError::CheckpointError;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_tensor(const std::filesystem::path& path, const Tensor& tensor);
Tensor load_tensor(const std::filesystem::path& path);
/// As load_tensor, then throws ShapeError unless the shape matches exactly.
Tensor load_tensor(const std::filesystem::path& path,
                   const std::vector<int>& expected_shape);

void save_network(const std::filesystem::path& path, const QNetwork& net);
QNetwork load_network(const std::filesystem::path& path);

}  // namespace crossway
