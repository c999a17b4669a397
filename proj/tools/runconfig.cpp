#include "runconfig.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "crossway/flatkv.hpp"

namespace crossway::cli {
namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw std::runtime_error("config key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    fail(key, "expected a number, got '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v) || std::abs(v) > 2e9) {
    fail(key, "expected an integer, got '" + value + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || errno == ERANGE || value.find('-') != std::string::npos) {
    fail(key, "expected a non-negative integer, got '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(key, "expected true/false, got '" + value + "'");
}

ScenarioId parse_task(const std::string& key, const std::string& value) {
  try {
    return scenario_from_string(value);
  } catch (const std::exception& e) {
    fail(key, e.what());
  }
}

std::vector<ScenarioId> parse_task_list(const std::string& key, const std::string& value) {
  std::vector<ScenarioId> out;
  for (const std::string& tok : split_list(value)) {
    out.push_back(parse_task(key, tok));
  }
  if (out.empty()) fail(key, "expected at least one task");
  return out;
}

void check_range(const std::string& key, double v, double lo, double hi) {
  if (v < lo || v > hi) {
    std::ostringstream os;
    os << "config key '" << key << "': value " << v << " outside [" << lo
       << ", " << hi << "]";
    throw std::runtime_error(os.str());
  }
}

void check_min(const std::string& key, double v, double lo) {
  if (v < lo) {
    std::ostringstream os;
    os << "config key '" << key << "': value " << v << " must be >= " << lo;
    throw std::runtime_error(os.str());
  }
}

std::string join_tasks(const std::vector<ScenarioId>& tasks) {
  std::string out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (i) out += ",";
    out += to_string(tasks[i]);
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  TrainConfig& t = cfg.train;
  SimConfig& s = t.sim;
  if (key == "train.epsilon") {
    t.epsilon = parse_double(key, value);
    check_range(key, t.epsilon, 0.0, 1.0);
  } else if (key == "train.gamma") {
    t.gamma = parse_double(key, value);
    check_range(key, t.gamma, 0.0, 1.0);
  } else if (key == "train.batch_size") {
    t.batch_size = parse_int(key, value);
    check_min(key, t.batch_size, 1);
  } else if (key == "train.iterations") {
    t.iterations = parse_int(key, value);
    check_min(key, t.iterations, 0);
  } else if (key == "train.learning_rate") {
    t.learning_rate = parse_double(key, value);
    check_min(key, t.learning_rate, 0.0);
  } else if (key == "train.rms_decay") {
    t.rms_decay = parse_double(key, value);
    check_range(key, t.rms_decay, 0.0, 1.0);
  } else if (key == "train.rms_epsilon") {
    t.rms_epsilon = parse_double(key, value);
    check_min(key, t.rms_epsilon, 0.0);
  } else if (key == "train.snapshot_every") {
    t.snapshot_every = parse_int(key, value);
    check_min(key, t.snapshot_every, 0);
  } else if (key == "train.snapshot_episodes") {
    t.snapshot_episodes = parse_int(key, value);
    check_min(key, t.snapshot_episodes, 1);
  } else if (key == "train.split_buffer") {
    t.split_buffer = parse_flag(key, value);
  } else if (key == "sim.dt") {
    s.dt = parse_double(key, value);
    if (s.dt <= 0.0) fail(key, "must be > 0");
  } else if (key == "sim.max_steps") {
    s.max_steps = parse_int(key, value);
    check_min(key, s.max_steps, 1);
  } else if (key == "sim.depart_probability") {
    s.depart_probability_per_second = parse_double(key, value);
    check_range(key, s.depart_probability_per_second, 0.0, 1.0);
  } else if (key == "sim.warmup_seconds") {
    s.warmup_seconds = parse_double(key, value);
    check_min(key, s.warmup_seconds, 0.0);
  } else if (key == "sim.krauss_sigma") {
    s.krauss_sigma = parse_double(key, value);
    check_range(key, s.krauss_sigma, 0.0, 1.0);
  } else if (key == "sim.idm.desired_speed") {
    s.idm.desired_speed = parse_double(key, value);
    if (s.idm.desired_speed <= 0.0) fail(key, "must be > 0");
  } else if (key == "sim.idm.max_accel") {
    s.idm.max_accel = parse_double(key, value);
    if (s.idm.max_accel <= 0.0) fail(key, "must be > 0");
  } else if (key == "sim.idm.comfortable_decel") {
    s.idm.comfortable_decel = parse_double(key, value);
    if (s.idm.comfortable_decel <= 0.0) fail(key, "must be > 0");
  } else if (key == "sim.idm.min_gap") {
    s.idm.min_gap = parse_double(key, value);
    check_min(key, s.idm.min_gap, 0.0);
  } else if (key == "sim.idm.headway_time") {
    s.idm.headway_time = parse_double(key, value);
    check_min(key, s.idm.headway_time, 0.0);
  } else if (key == "task") {
    cfg.task = parse_task(key, value);
  } else if (key == "source") {
    cfg.source = parse_task(key, value);
  } else if (key == "target") {
    cfg.target = parse_task(key, value);
  } else if (key == "checkpoint") {
    cfg.checkpoint = value;
  } else if (key == "eval.episodes") {
    cfg.eval_episodes = parse_int(key, value);
    check_min(key, cfg.eval_episodes, 1);
  } else if (key == "experiment.tasks") {
    cfg.tasks = parse_task_list(key, value);
  } else if (key == "experiment.seeds") {
    cfg.seeds = parse_int(key, value);
    check_min(key, cfg.seeds, 1);
  } else if (key == "experiment.master_seed") {
    cfg.master_seed = parse_u64(key, value);
  } else if (key == "experiment.threads") {
    cfg.max_threads = parse_int(key, value);
    check_min(key, cfg.max_threads, 0);
  } else if (key == "finetune.pretrain_iterations") {
    cfg.pretrain_iterations = parse_int(key, value);
    check_min(key, cfg.pretrain_iterations, 0);
  } else if (key == "finetune.iterations") {
    cfg.finetune_iterations = parse_int(key, value);
    check_min(key, cfg.finetune_iterations, 1);
  } else if (key == "lifelong.block_iterations") {
    cfg.lifelong_block_iterations = parse_int(key, value);
    check_min(key, cfg.lifelong_block_iterations, 1);
  } else if (key == "lifelong.eval_cadence") {
    cfg.lifelong_eval_cadence = parse_int(key, value);
    check_min(key, cfg.lifelong_eval_cadence, 1);
  } else if (key == "lifelong.eval_episodes") {
    cfg.lifelong_eval_episodes = parse_int(key, value);
    check_min(key, cfg.lifelong_eval_episodes, 1);
  } else if (key == "lifelong.order") {
    cfg.lifelong_order = parse_task_list(key, value);
  } else if (key == "out.root") {
    cfg.out_root = value;
  } else if (key == "run.name") {
    cfg.run_name = value;
  } else {
    throw std::runtime_error("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& file_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  if (!file_path.empty()) {
    const FlatKv kv = FlatKv::parse_file(file_path);
    for (const std::string& key : kv.keys()) {
      apply_key(cfg, key, kv.get(key));
    }
  }
  for (const auto& [key, value] : overrides) {
    apply_key(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  train.validate();  // backstop; names the field
  if (eval_episodes < 1) fail("eval.episodes", "must be >= 1");
  if (seeds < 1) fail("experiment.seeds", "must be >= 1");
  if (tasks.empty()) fail("experiment.tasks", "must not be empty");
  if (lifelong_order.empty()) fail("lifelong.order", "must not be empty");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  const TrainConfig& t = train;
  const SimConfig& s = t.sim;
  e.emplace_back("train.epsilon", fmt(t.epsilon));
  e.emplace_back("train.gamma", fmt(t.gamma));
  e.emplace_back("train.batch_size", std::to_string(t.batch_size));
  e.emplace_back("train.iterations", std::to_string(t.iterations));
  e.emplace_back("train.learning_rate", fmt(t.learning_rate));
  e.emplace_back("train.rms_decay", fmt(t.rms_decay));
  e.emplace_back("train.rms_epsilon", fmt(t.rms_epsilon));
  e.emplace_back("train.snapshot_every", std::to_string(t.snapshot_every));
  e.emplace_back("train.snapshot_episodes", std::to_string(t.snapshot_episodes));
  e.emplace_back("train.split_buffer", t.split_buffer ? "true" : "false");
  e.emplace_back("sim.dt", fmt(s.dt));
  e.emplace_back("sim.max_steps", std::to_string(s.max_steps));
  e.emplace_back("sim.depart_probability", fmt(s.depart_probability_per_second));
  e.emplace_back("sim.warmup_seconds", fmt(s.warmup_seconds));
  e.emplace_back("sim.krauss_sigma", fmt(s.krauss_sigma));
  e.emplace_back("sim.idm.desired_speed", fmt(s.idm.desired_speed));
  e.emplace_back("sim.idm.max_accel", fmt(s.idm.max_accel));
  e.emplace_back("sim.idm.comfortable_decel", fmt(s.idm.comfortable_decel));
  e.emplace_back("sim.idm.min_gap", fmt(s.idm.min_gap));
  e.emplace_back("sim.idm.headway_time", fmt(s.idm.headway_time));
  e.emplace_back("task", to_string(task));
  e.emplace_back("source", to_string(source));
  e.emplace_back("target", to_string(target));
  if (!checkpoint.empty()) e.emplace_back("checkpoint", checkpoint);
  e.emplace_back("eval.episodes", std::to_string(eval_episodes));
  e.emplace_back("experiment.tasks", join_tasks(tasks));
  e.emplace_back("experiment.seeds", std::to_string(seeds));
  e.emplace_back("experiment.master_seed", std::to_string(master_seed));
  e.emplace_back("experiment.threads", std::to_string(max_threads));
  e.emplace_back("finetune.pretrain_iterations", std::to_string(pretrain_iterations));
  e.emplace_back("finetune.iterations", std::to_string(finetune_iterations));
  e.emplace_back("lifelong.block_iterations", std::to_string(lifelong_block_iterations));
  e.emplace_back("lifelong.eval_cadence", std::to_string(lifelong_eval_cadence));
  e.emplace_back("lifelong.eval_episodes", std::to_string(lifelong_eval_episodes));
  e.emplace_back("lifelong.order", join_tasks(lifelong_order));
  if (!out_root.empty()) e.emplace_back("out.root", out_root);
  if (!run_name.empty()) e.emplace_back("run.name", run_name);
  return e;
}

}  // namespace crossway::cli
