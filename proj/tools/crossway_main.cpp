// Command-line entry point: train/evaluate single networks, run the transfer
// experiments, and report aggregated results.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "crossway/flatkv.hpp"
#include "runconfig.hpp"

namespace {

using crossway::cli::Invocation;

// Collects one subcommand's config sources: an optional file, typed
// convenience flags, and raw --set key=value pairs. Precedence: defaults,
// then file, then flags, then --set.
struct ConfigArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> named;

  void add_common(CLI::App& app) {
    app.add_option("--config", config_file, "flat key = value config file");
    app.add_option("--set", sets,
                   "override any config key, e.g. --set train.epsilon=0.1")
        ->take_all();
    bind(app, "--seed", "experiment.master_seed", "master seed");
    bind(app, "--seeds", "experiment.seeds", "independent repetitions");
    bind(app, "--eval-episodes", "eval.episodes", "episodes per evaluation");
    bind(app, "--threads", "experiment.threads", "worker threads (0 = auto)");
    bind(app, "--out-root", "out.root", "output root directory");
    bind(app, "--run-name", "run.name", "output directory name");
  }

  // Registers a string option that lands in the override list as `key`.
  void bind(CLI::App& app, const std::string& flag, const std::string& key,
            const std::string& help) {
    auto setter = [this, key](const std::string& value) {
      named.emplace_back(key, value);
    };
    app.add_option_function<std::string>(flag, setter, help);
  }

  Invocation resolve() const {
    std::vector<std::pair<std::string, std::string>> overrides = named;
    for (const std::string& s : sets) {
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("--set expects key=value, got '" + s + "'");
      }
      overrides.emplace_back(crossway::trim(s.substr(0, eq)),
                             crossway::trim(s.substr(eq + 1)));
    }
    Invocation inv;
    inv.cfg = crossway::cli::parse_config(config_file, overrides);
    inv.flag_overrides = overrides;
    return inv;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traffic-intersection DQN transfer workbench"};
  app.require_subcommand(1);
  int rc = 0;

  auto add_run_command = [&](const std::string& name, const std::string& help,
                             int (*fn)(const Invocation&)) -> std::pair<CLI::App*, ConfigArgs*> {
    CLI::App* sub = app.add_subcommand(name, help);
    auto args = std::make_shared<ConfigArgs>();
    args->add_common(*sub);
    sub->callback([args, fn, &rc] { rc = fn(args->resolve()); });
    return {sub, args.get()};
  };

  {
    auto [sub, args] = add_run_command("train", "train one network on one task",
                                       crossway::cli::cmd_train);
    args->bind(*sub, "--task", "task", "scenario to train on");
    args->bind(*sub, "--iterations", "train.iterations", "training iterations");
    args->bind(*sub, "--epsilon", "train.epsilon", "exploration rate");
    args->bind(*sub, "--gamma", "train.gamma", "discount factor");
    args->bind(*sub, "--snapshot-every", "train.snapshot_every",
               "learning-curve cadence (iterations)");
  }
  {
    auto [sub, args] = add_run_command(
        "evaluate", "greedy evaluation of a checkpoint", crossway::cli::cmd_evaluate);
    args->bind(*sub, "--task", "task", "scenario to evaluate on");
    args->bind(*sub, "--checkpoint", "checkpoint", "network checkpoint file");
  }
  {
    auto [sub, args] = add_run_command(
        "direct-copy", "train per task, evaluate every network on every task",
        crossway::cli::cmd_direct_copy);
    args->bind(*sub, "--tasks", "experiment.tasks", "comma-separated task list");
    args->bind(*sub, "--iterations", "train.iterations", "training iterations per task");
    args->bind(*sub, "--snapshot-every", "train.snapshot_every",
               "learning-curve cadence (iterations)");
  }
  {
    auto [sub, args] = add_run_command(
        "fine-tune", "continue training a source network on a target task",
        crossway::cli::cmd_fine_tune);
    args->bind(*sub, "--source", "source", "pretraining scenario");
    args->bind(*sub, "--target", "target", "fine-tuning scenario");
    args->bind(*sub, "--pretrain-iterations", "finetune.pretrain_iterations",
               "iterations on the source task");
    args->bind(*sub, "--finetune-iterations", "finetune.iterations",
               "iterations on the target task");
  }
  {
    auto [sub, args] = add_run_command(
        "reverse", "source skill retained after fine-tuning on a target",
        crossway::cli::cmd_reverse);
    args->bind(*sub, "--source", "source", "pretraining scenario");
    args->bind(*sub, "--target", "target", "fine-tuning scenario");
    args->bind(*sub, "--pretrain-iterations", "finetune.pretrain_iterations",
               "iterations on the source task");
    args->bind(*sub, "--finetune-iterations", "finetune.iterations",
               "iterations on the target task");
  }
  {
    auto [sub, args] = add_run_command(
        "lifelong", "one network through a sequence of task blocks",
        crossway::cli::cmd_lifelong);
    args->bind(*sub, "--order", "lifelong.order", "comma-separated block order");
    args->bind(*sub, "--block-iterations", "lifelong.block_iterations",
               "iterations per block");
    args->bind(*sub, "--eval-cadence", "lifelong.eval_cadence",
               "iterations between five-task sweeps");
    args->bind(*sub, "--sweep-episodes", "lifelong.eval_episodes",
               "episodes per task per sweep");
  }
  {
    CLI::App* sub = app.add_subcommand("geometry", "print the scenario geometry");
    auto out = std::make_shared<std::string>();
    sub->add_option("--out", *out, "write to a file instead of stdout");
    sub->callback([out, &rc] { rc = crossway::cli::cmd_geometry(*out); });
  }
  {
    CLI::App* sub =
        app.add_subcommand("report", "aggregate direct-copy runs into one table");
    auto root = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("--root", *root, "directory holding run outputs");
    sub->add_option("--out", *out, "also write the table to a file");
    sub->callback([root, out, &rc] { rc = crossway::cli::cmd_report(*root, *out); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
