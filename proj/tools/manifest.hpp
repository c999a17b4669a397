#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "runconfig.hpp"

namespace crossway::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutRootEnvVar = "CROSSWAY_OUT_ROOT";

/// Resolution order for the output root: --out-root flag / config key,
/// then $CROSSWAY_OUT_ROOT, then "runs".
std::filesystem::path resolve_out_root(const std::string& configured);

/// Creates <root>/<run_name> (default name: <command>-<UTC stamp>-s<seed>).
/// Refuses to reuse a directory that already holds a manifest.
std::filesystem::path create_run_dir(const std::filesystem::path& root,
                                     const std::string& run_name,
                                     const std::string& command,
                                     std::uint64_t master_seed);

// Records everything a run emits and writes manifest.json atomically at the
// end. Paths are registered relative to the run directory.
class RunManifest {
 public:
  RunManifest(std::string command, std::filesystem::path run_dir,
              const RunConfig& cfg,
              std::vector<std::pair<std::string, std::string>> flag_overrides);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& relative) const {
    return dir_ / relative;
  }

  /// Registers an emitted file; it must exist by the time finish() runs.
  void add_artifact(const std::string& relative_path);

  /// Hashes every artifact and writes <run_dir>/manifest.json (tmp + rename).
  void finish();

 private:
  std::string command_;
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> config_entries_;
  std::vector<std::pair<std::string, std::string>> flags_;
  std::vector<std::string> artifacts_;
  std::chrono::system_clock::time_point started_;
};

/// FNV-1a over a file's bytes; throws on read failure.
std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace crossway::cli
