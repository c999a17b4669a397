#pragma once

#include <string>
#include <utility>
#include <vector>

#include "runconfig.hpp"

namespace crossway::cli {

// Flag overrides travel alongside the config so the manifest can record them.
struct Invocation {
  RunConfig cfg;
  std::vector<std::pair<std::string, std::string>> flag_overrides;
};

int cmd_train(const Invocation& inv);
int cmd_evaluate(const Invocation& inv);
int cmd_direct_copy(const Invocation& inv);
int cmd_fine_tune(const Invocation& inv);
int cmd_reverse(const Invocation& inv);
int cmd_lifelong(const Invocation& inv);

/// Prints the active scenario geometry (optionally to a file).
int cmd_geometry(const std::string& out_file);

/// Aggregates direct-copy runs under `root` into the five-by-five success
/// table (mean +/- stddev over seeds). Reads only; never touches run
/// artifacts. Fails with "no runs found" when nothing matches.
int cmd_report(const std::string& root, const std::string& out_file);

}  // namespace crossway::cli
