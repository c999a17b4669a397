#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crossway/scenario.hpp"
#include "crossway/trainer.hpp"

namespace crossway::cli {

// Everything a run needs, resolved from defaults, an optional config file,
// and command-line overrides (flags win).
struct RunConfig {
  TrainConfig train;                  // includes the simulator parameters
  std::vector<ScenarioId> tasks{kAllScenarios.begin(), kAllScenarios.end()};
  ScenarioId task = ScenarioId::Right;
  ScenarioId source = ScenarioId::Right;
  ScenarioId target = ScenarioId::Forward;
  int eval_episodes = 500;
  int seeds = 3;
  std::uint64_t master_seed = 0;
  int pretrain_iterations = 1000;
  int finetune_iterations = 2000;
  int lifelong_block_iterations = 1500;
  int lifelong_eval_cadence = 250;
  int lifelong_eval_episodes = 200;
  std::vector<ScenarioId> lifelong_order{ScenarioId::Forward, ScenarioId::Right,
                                         ScenarioId::Left, ScenarioId::Left2,
                                         ScenarioId::Challenge};
  int max_threads = 0;
  std::string out_root;  // resolved against CROSSWAY_OUT_ROOT / "runs"
  std::string run_name;  // empty = command-timestamp-seed
  std::string checkpoint;

  /// The full effective configuration as "key = value" lines (stable order).
  std::vector<std::pair<std::string, std::string>> entries() const;

  /// Range checks beyond per-key parsing; throws naming the offending key.
  void validate() const;
};

/// Applies a config file (optional) and then flag overrides onto the
/// defaults. Throws std::runtime_error naming any unknown key, malformed
/// value, or out-of-range value.
RunConfig parse_config(const std::string& file_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

/// Sets one dotted key on the config; shared by file and flag parsing.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace crossway::cli
