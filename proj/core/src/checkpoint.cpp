#include "crossway/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace crossway {

namespace {

constexpr char kMagic[8] = {'C', 'W', 'C', 'K', 'P', 'T', '\0', '\0'};
constexpr std::uint32_t kMaxRank = 64;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw TruncatedError(std::string("checkpoint ends inside ") + what);
    }
  }

  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }

  std::uint64_t u64(const char* what) {
    std::uint64_t v = u32(what);
    return v | (static_cast<std::uint64_t>(u32(what)) << 32);
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

}  // namespace

void save_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  tensor.validate();
  std::string out;
  out.reserve(32 + tensor.data.size() * 8);
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(tensor.shape.size()));
  for (int d : tensor.shape) put_u32(out, static_cast<std::uint32_t>(d));
  put_u64(out, tensor.data.size());
  for (double v : tensor.data) put_u64(out, std::bit_cast<std::uint64_t>(v));

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
    }
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) {
      throw CheckpointError("short write to checkpoint '" + path.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  }
  Reader r(f);

  char magic[8];
  r.bytes(magic, sizeof(magic), "the magic string");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("'" + path.string() + "' is not a checkpoint file");
  }
  std::uint32_t version = r.u32("the version field");
  if (version != kCheckpointVersion) {
    throw VersionError("checkpoint version " + std::to_string(version) +
                       " unsupported (expected " +
                       std::to_string(kCheckpointVersion) + ")");
  }
  std::uint32_t rank = r.u32("the shape header");
  if (rank == 0 || rank > kMaxRank) {
    throw FormatError("checkpoint rank " + std::to_string(rank) + " out of range");
  }
  Tensor t;
  std::uint64_t product = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    std::uint32_t d = r.u32("the shape header");
    if (d == 0) throw FormatError("checkpoint shape holds a zero dimension");
    t.shape.push_back(static_cast<int>(d));
    product *= d;
  }
  std::uint64_t count = r.u64("the value count");
  if (count != product) {
    throw FormatError("checkpoint value count disagrees with its shape");
  }
  t.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    double v = std::bit_cast<double>(r.u64("the values"));
    if (!std::isfinite(v)) {
      throw FormatError("checkpoint holds a non-finite value");
    }
    t.data[i] = v;
  }
  if (!r.at_end()) {
    throw FormatError("checkpoint '" + path.string() + "' has trailing bytes");
  }
  return t;
}

Tensor load_tensor(const std::filesystem::path& path,
                   const std::vector<int>& expected_shape) {
  Tensor t = load_tensor(path);
  if (t.shape != expected_shape) {
    throw ShapeError("checkpoint shape does not match the expected layout");
  }
  return t;
}

void save_network(const std::filesystem::path& path, const QNetwork& net) {
  Tensor t;
  t.shape = {QNetwork::param_count()};
  t.data = net.params();
  save_tensor(path, t);
}

QNetwork load_network(const std::filesystem::path& path) {
  Tensor t = load_tensor(path, {QNetwork::param_count()});
  QNetwork net;
  net.params() = std::move(t.data);
  return net;
}

}  // namespace crossway
