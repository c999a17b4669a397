#include <atomic>
#include <numeric>

#include "crossway/evaluate.hpp"
#include "crossway/transfer.hpp"
#include "doctest.h"

using namespace crossway;

namespace {

ExperimentConfig tiny_experiment() {
  ExperimentConfig cfg;
  cfg.train.iterations = 5;
  cfg.train.sim.depart_probability_per_second = 0.05;
  cfg.tasks = {ScenarioId::Right, ScenarioId::Forward};
  cfg.eval_episodes = 8;
  cfg.seeds = 1;
  cfg.max_threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("evaluation leaves training state untouched") {
  TrainConfig cfg;
  cfg.seed = 21;
  cfg.sim.depart_probability_per_second = 0.05;
  Trainer t(ScenarioId::Right, cfg);
  t.train_for(6);
  const std::uint64_t digest = t.training_state_digest();

  SimConfig sim;
  (void)evaluate(t.network(), ScenarioId::Right, 12, sim, 777);
  (void)evaluate(t.network(), ScenarioId::Challenge, 12, sim, 778);
  CHECK(t.training_state_digest() == digest);
}

TEST_CASE("evaluation percentages account for every episode") {
  Rng rng(31);
  QNetwork net = QNetwork::random_init(rng);
  SimConfig sim;
  EvaluationReport rep = evaluate(net, ScenarioId::Challenge, 25, sim, 4);
  CHECK(rep.n_episodes == 25);
  CHECK(rep.task == ScenarioId::Challenge);
  CHECK(rep.pct_success + rep.pct_collision + rep.pct_timeout ==
        doctest::Approx(100.0).epsilon(1e-9));
  CHECK(rep.pct_success >= 0.0);
  CHECK(rep.pct_collision >= 0.0);
  CHECK(rep.pct_timeout >= 0.0);
  CHECK(rep.avg_brake_time >= 0.0);
}

TEST_CASE("an all-zero network goes immediately and crosses an empty road") {
  QNetwork net;  // zero parameters: all action values tie, argmax picks go
  SimConfig sim;
  sim.depart_probability_per_second = 0.0;
  EvaluationReport rep = evaluate(net, ScenarioId::Left, 10, sim, 9);
  CHECK(rep.pct_success == doctest::Approx(100.0));
  CHECK(rep.pct_collision == 0.0);
  CHECK(rep.avg_brake_time == 0.0);
  CHECK(rep.avg_time_success > 0.0);
}

TEST_CASE("evaluation is seed-deterministic") {
  Rng rng(33);
  QNetwork net = QNetwork::random_init(rng);
  SimConfig sim;
  EvaluationReport a = evaluate(net, ScenarioId::Forward, 15, sim, 42);
  EvaluationReport b = evaluate(net, ScenarioId::Forward, 15, sim, 42);
  CHECK(a.pct_success == b.pct_success);
  CHECK(a.pct_collision == b.pct_collision);
  CHECK(a.avg_time_success == b.avg_time_success);
  CHECK(a.avg_brake_time == b.avg_brake_time);
}

TEST_CASE("parallel_for touches every index exactly once") {
  std::vector<std::atomic<int>> hits(50);
  for (auto& h : hits) h = 0;
  parallel_for(50, [&](int i) { ++hits[i]; }, 4);
  for (auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_WITH_AS(
      parallel_for(8, [](int i) {
        if (i == 5) throw std::runtime_error("boom");
      }, 2),
      "boom", std::runtime_error);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg = tiny_experiment();
  CHECK_NOTHROW(cfg.validate());
  cfg.eval_episodes = 0;
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg = tiny_experiment();
  cfg.seeds = 0;
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
  cfg = tiny_experiment();
  cfg.tasks.clear();
  CHECK_THROWS_AS(cfg.validate(), std::runtime_error);
}

TEST_CASE("direct copy fills the whole matrix") {
  ExperimentConfig cfg = tiny_experiment();
  DirectCopyRun run = direct_copy_experiment(cfg, 51);
  REQUIRE(run.matrix.tasks == cfg.tasks);
  REQUIRE(run.matrix.cells.size() == 2);
  for (const auto& row : run.matrix.cells) REQUIRE(row.size() == 2);

  const EvaluationReport& rf = run.matrix.at(ScenarioId::Right, ScenarioId::Forward);
  CHECK(rf.task == ScenarioId::Forward);
  CHECK(rf.n_episodes == cfg.eval_episodes);
  CHECK_THROWS_AS(run.matrix.at(ScenarioId::Left, ScenarioId::Right),
                  std::runtime_error);

  REQUIRE(run.trained_params.size() == 2);
  for (const auto& p : run.trained_params) {
    CHECK(p.size() == static_cast<std::size_t>(QNetwork::param_count()));
  }
  CHECK(run.trained_params[0] != run.trained_params[1]);

  DirectCopyRun again = direct_copy_experiment(cfg, 51);
  CHECK(again.trained_params == run.trained_params);
  for (int t = 0; t < 2; ++t) {
    for (int e = 0; e < 2; ++e) {
      CHECK(again.matrix.cells[t][e].pct_success ==
            run.matrix.cells[t][e].pct_success);
    }
  }
}

TEST_CASE("sweeps run one experiment per seed") {
  ExperimentConfig cfg = tiny_experiment();
  cfg.seeds = 2;
  auto runs = direct_copy_sweep(cfg);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].seed != runs[1].seed);
  CHECK(runs[0].trained_params[0] != runs[1].trained_params[0]);
}

TEST_CASE("fine-tuning produces paired curves from one jumpstart point") {
  ExperimentConfig cfg = tiny_experiment();
  cfg.train.snapshot_every = 3;
  cfg.train.snapshot_episodes = 4;

  std::vector<double> source(QNetwork::param_count(), 0.0);
  FineTuneResult r = fine_tune_from(source, ScenarioId::Right,
                                    ScenarioId::Forward, 6, cfg, 61);
  CHECK(r.source == ScenarioId::Right);
  CHECK(r.target == ScenarioId::Forward);
  REQUIRE_FALSE(r.pretrained_curve.empty());
  REQUIRE_FALSE(r.fresh_curve.empty());
  CHECK(r.pretrained_curve.front().iteration == 0);
  CHECK(r.fresh_curve.front().iteration == 0);
  CHECK(r.pretrained_curve.back().iteration == 6);
  CHECK(r.finetuned_params.size() ==
        static_cast<std::size_t>(QNetwork::param_count()));
  CHECK(r.fresh_params.size() == r.finetuned_params.size());
  CHECK(r.finetuned_params != r.fresh_params);

  FineTuneResult again = fine_tune_from(source, ScenarioId::Right,
                                        ScenarioId::Forward, 6, cfg, 61);
  CHECK(again.finetuned_params == r.finetuned_params);
  CHECK(again.fresh_params == r.fresh_params);

  std::vector<double> short_params(10, 0.0);
  CHECK_THROWS_AS(fine_tune_from(short_params, ScenarioId::Right,
                                 ScenarioId::Forward, 6, cfg, 61),
                  std::runtime_error);
}

TEST_CASE("reverse transfer reports retention above the baseline") {
  ExperimentConfig cfg = tiny_experiment();
  std::vector<double> params(QNetwork::param_count(), 0.0);
  RetentionEntry e = reverse_transfer_experiment(
      params, ScenarioId::Right, ScenarioId::Forward, 40.0, cfg, 71);
  CHECK(e.source == ScenarioId::Right);
  CHECK(e.target == ScenarioId::Forward);
  CHECK(e.direct_copy_baseline == 40.0);
  CHECK(e.retention_points ==
        doctest::Approx(e.finetuned_on_source - 40.0).epsilon(1e-12));
}

TEST_CASE("lifelong sweeps land at the cadence and block boundaries") {
  LifelongSchedule schedule;
  schedule.blocks = {{ScenarioId::Forward, 4}, {ScenarioId::Right, 4}};
  schedule.eval_cadence = 2;
  schedule.eval_episodes = 4;

  TrainConfig train;
  train.seed = 0;
  train.sim.depart_probability_per_second = 0.05;

  LifelongResult r = lifelong_experiment(schedule, train, 81);
  // Sweeps at iteration 0, then 2, 4 in the first block and 6, 8 in the
  // second (block ends coincide with the cadence here).
  REQUIRE(r.points.size() == 5);
  CHECK(r.points[0].iteration == 0);
  CHECK(r.points[1].iteration == 2);
  CHECK(r.points[2].iteration == 4);
  CHECK(r.points[3].iteration == 6);
  CHECK(r.points[4].iteration == 8);
  CHECK(r.points[1].training_task == ScenarioId::Forward);
  CHECK(r.points[4].training_task == ScenarioId::Right);

  for (int t = 0; t < kScenarioCount; ++t) {
    double peak = 0.0;
    for (const LifelongPoint& p : r.points) peak = std::max(peak, p.success[t]);
    CHECK(r.peak[t] == doctest::Approx(peak));
    CHECK(r.final[t] == doctest::Approx(r.points.back().success[t]));
    CHECK(r.peak[t] >= r.final[t]);
  }

  LifelongSchedule bad = schedule;
  bad.eval_cadence = 0;
  CHECK_THROWS_AS(lifelong_experiment(bad, train, 81), std::runtime_error);
}
