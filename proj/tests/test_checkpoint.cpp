#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "crossway/checkpoint.hpp"
#include "crossway/rng.hpp"
#include "doctest.h"

using namespace crossway;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("ckpt_test_" + name);
}

std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Tensor sample_tensor() {
  Tensor t;
  t.shape = {2, 3, 4};
  t.data.resize(24);
  Rng rng(55);
  for (double& v : t.data) v = rng.uniform(-1e6, 1e6);
  t.data[0] = -0.0;
  t.data[1] = 1e-308;   // subnormal-adjacent but representable
  t.data[2] = -1e300;
  return t;
}

}  // namespace

TEST_CASE("tensor round-trip is bitwise") {
  const fs::path p = temp_file("roundtrip.ckpt");
  const Tensor original = sample_tensor();
  save_tensor(p, original);
  const Tensor loaded = load_tensor(p);
  CHECK(loaded.shape == original.shape);
  REQUIRE(loaded.data.size() == original.data.size());
  for (std::size_t i = 0; i < loaded.data.size(); ++i) {
    CHECK(std::memcmp(&loaded.data[i], &original.data[i], sizeof(double)) == 0);
  }
  fs::remove(p);
}

TEST_CASE("no temporary file survives a save") {
  const fs::path p = temp_file("atomic.ckpt");
  save_tensor(p, sample_tensor());
  int siblings = 0;
  for (const auto& e : fs::directory_iterator(p.parent_path())) {
    const std::string name = e.path().filename().string();
    if (name.rfind("ckpt_test_atomic", 0) == 0) ++siblings;
  }
  CHECK(siblings == 1);
  fs::remove(p);
}

TEST_CASE("bad magic is a format error") {
  const fs::path p = temp_file("magic.ckpt");
  save_tensor(p, sample_tensor());
  auto bytes = read_bytes(p);
  bytes[0] = 'X';
  write_bytes(p, bytes);
  CHECK_THROWS_AS(load_tensor(p), FormatError);
  fs::remove(p);
}

TEST_CASE("unknown version is a version error") {
  const fs::path p = temp_file("version.ckpt");
  save_tensor(p, sample_tensor());
  auto bytes = read_bytes(p);
  bytes[8] = 99;  // little-endian version word
  write_bytes(p, bytes);
  CHECK_THROWS_AS(load_tensor(p), VersionError);
  fs::remove(p);
}

TEST_CASE("truncation is detected in header and payload") {
  const fs::path p = temp_file("trunc.ckpt");
  save_tensor(p, sample_tensor());
  const auto bytes = read_bytes(p);

  write_bytes(p, {bytes.begin(), bytes.begin() + 5});
  CHECK_THROWS_AS(load_tensor(p), TruncatedError);

  write_bytes(p, {bytes.begin(), bytes.begin() + 20});
  CHECK_THROWS_AS(load_tensor(p), TruncatedError);

  write_bytes(p, {bytes.begin(), bytes.end() - 8});  // one value short
  CHECK_THROWS_AS(load_tensor(p), TruncatedError);
  fs::remove(p);
}

TEST_CASE("trailing bytes are a format error") {
  const fs::path p = temp_file("trailing.ckpt");
  save_tensor(p, sample_tensor());
  auto bytes = read_bytes(p);
  bytes.push_back('\0');
  write_bytes(p, bytes);
  CHECK_THROWS_AS(load_tensor(p), FormatError);
  fs::remove(p);
}

TEST_CASE("shape expectations are enforced") {
  const fs::path p = temp_file("shape.ckpt");
  save_tensor(p, sample_tensor());
  CHECK_NOTHROW(load_tensor(p, {2, 3, 4}));
  CHECK_THROWS_AS(load_tensor(p, {24}), ShapeError);
  CHECK_THROWS_AS(load_tensor(p, {2, 3, 5}), ShapeError);
  fs::remove(p);
}

TEST_CASE("non-finite payloads are rejected on load") {
  const fs::path p = temp_file("nan.ckpt");
  Tensor t;
  t.shape = {2};
  t.data = {1.0, 2.0};
  save_tensor(p, t);
  auto bytes = read_bytes(p);
  // Overwrite the last value with a quiet NaN, little endian.
  const std::uint64_t nan_bits = 0x7ff8000000000000ull;
  std::memcpy(bytes.data() + bytes.size() - 8, &nan_bits, 8);
  write_bytes(p, bytes);
  CHECK_THROWS_AS(load_tensor(p), FormatError);
  fs::remove(p);
}

TEST_CASE("missing file reports its path") {
  CHECK_THROWS_WITH_AS(load_tensor(temp_file("nonexistent.ckpt")),
                       doctest::Contains("nonexistent"), CheckpointError);
}

TEST_CASE("network round-trip preserves the forward pass bitwise") {
  const fs::path p = temp_file("net.ckpt");
  Rng rng(66);
  QNetwork net = QNetwork::random_init(rng);
  save_network(p, net);
  const QNetwork loaded = load_network(p);
  CHECK(loaded.params() == net.params());

  OccupancyGrid g;
  g.at(3, 4, 0) = 1.0;
  g.at(3, 4, 1) = 0.7;
  g.at(7, 13, 2) = 1.0;
  const auto qa = net.forward(g);
  const auto qb = loaded.forward(g);
  for (int i = 0; i < kNumActions; ++i) {
    CHECK(std::memcmp(&qa[i], &qb[i], sizeof(double)) == 0);
  }
  fs::remove(p);
}

TEST_CASE("tensor validation rejects malformed shapes") {
  Tensor t;
  t.shape = {2, 0};
  t.data = {};
  const fs::path p = temp_file("badshape.ckpt");
  CHECK_THROWS_AS(save_tensor(p, t), std::exception);
  t.shape = {3};
  t.data = {1.0, 2.0};  // count mismatch
  CHECK_THROWS_AS(save_tensor(p, t), std::exception);
}
