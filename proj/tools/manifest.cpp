#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "crossway/hash.hpp"
#include "json.hpp"

namespace crossway::cli {
namespace {

std::string utc_now_string() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string utc_stamp_compact() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return buf;
}

}  // namespace

std::filesystem::path resolve_out_root(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv(kOutRootEnvVar); env && *env) return env;
  return "runs";
}

std::filesystem::path create_run_dir(const std::filesystem::path& root,
                                     const std::string& run_name,
                                     const std::string& command,
                                     std::uint64_t master_seed) {
  std::string name = run_name;
  if (name.empty()) {
    name = command + "-" + utc_stamp_compact() + "-s" + std::to_string(master_seed);
  }
  const std::filesystem::path dir = root / name;
  if (std::filesystem::exists(dir / "manifest.json")) {
    throw std::runtime_error("refusing to overwrite finished run: " + dir.string());
  }
  std::filesystem::create_directories(dir);
  return dir;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return fnv1a64(std::string_view(bytes.data(), bytes.size()));
}

RunManifest::RunManifest(std::string command, std::filesystem::path run_dir,
                         const RunConfig& cfg,
                         std::vector<std::pair<std::string, std::string>> flag_overrides)
    : command_(std::move(command)),
      dir_(std::move(run_dir)),
      config_entries_(cfg.entries()),
      flags_(std::move(flag_overrides)),
      started_(std::chrono::system_clock::now()) {}

void RunManifest::add_artifact(const std::string& relative_path) {
  artifacts_.push_back(relative_path);
}

void RunManifest::finish() {
  nlohmann::ordered_json doc;
  doc["command"] = command_;
  doc["version"] = kToolVersion;
  doc["started_utc"] = utc_now_string();  // overwritten below with real start
  // Represent the start from the captured clock, not "now".
  {
    const std::time_t t = std::chrono::system_clock::to_time_t(started_);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    doc["started_utc"] = buf;
  }
  doc["finished_utc"] = utc_now_string();
  doc["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::system_clock::now() - started_)
          .count();

  // Effective configuration: feeding these keys back reproduces the run.
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config_entries_) cfg[k] = v;
  doc["config"] = cfg;

  // Flag overrides are also recorded separately for provenance.
  nlohmann::ordered_json flags = nlohmann::ordered_json::object();
  for (const auto& [k, v] : flags_) flags[k] = v;
  doc["flag_overrides"] = flags;

  nlohmann::ordered_json arts = nlohmann::ordered_json::array();
  for (const std::string& rel : artifacts_) {
    const std::filesystem::path p = dir_ / rel;
    nlohmann::ordered_json a;
    a["path"] = rel;
    a["bytes"] = static_cast<std::uint64_t>(std::filesystem::file_size(p));
    a["fnv1a64"] = to_hex(hash_file(p));
    arts.push_back(a);
  }
  doc["artifacts"] = arts;

  const std::filesystem::path tmp = dir_ / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << doc.dump(2) << "\n";
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, dir_ / "manifest.json");
}

}  // namespace crossway::cli
