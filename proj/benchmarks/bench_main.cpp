#include <benchmark/benchmark.h>

#include "crossway/agent.hpp"
#include "crossway/grid.hpp"
#include "crossway/qnetwork.hpp"
#include "crossway/replay.hpp"
#include "crossway/rmsprop.hpp"
#include "crossway/rng.hpp"
#include "crossway/sim.hpp"

using namespace crossway;

namespace {

OccupancyGrid busy_grid(Rng& rng) {
  OccupancyGrid g;
  for (int i = 0; i < 14; ++i) {
    int row = static_cast<int>(rng.uniform_index(kGridRows));
    int col = static_cast<int>(rng.uniform_index(kGridCols));
    g.at(row, col, kChannelOccupancy) = 1.0;
    g.at(row, col, kChannelSpeed) = rng.uniform();
  }
  g.at(7, 13, kChannelEgo) = 1.0;
  return g;
}

}  // namespace

static void BM_NetworkForward(benchmark::State& state) {
  Rng rng(1);
  QNetwork net = QNetwork::random_init(rng);
  OccupancyGrid g = busy_grid(rng);
  for (auto _ : state) {
    auto q = net.forward(g);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_NetworkForward);

static void BM_NetworkForwardBackward(benchmark::State& state) {
  Rng rng(2);
  QNetwork net = QNetwork::random_init(rng);
  OccupancyGrid g = busy_grid(rng);
  std::vector<double> grads(net.params().size(), 0.0);
  QNetwork::Cache cache;
  for (auto _ : state) {
    auto q = net.forward(g, &cache);
    std::array<double, kNumActions> dq{};
    dq[0] = 2.0 * (q[0] - 0.5);
    net.backward(g, cache, dq, grads);
    benchmark::DoNotOptimize(grads.data());
  }
}
BENCHMARK(BM_NetworkForwardBackward);

static void BM_BatchUpdate(benchmark::State& state) {
  Rng rng(3);
  QNetwork net = QNetwork::random_init(rng);
  RmsProp opt(QNetwork::param_count());
  std::vector<Experience> pool;
  for (int i = 0; i < kBatchSize; ++i) {
    Experience e;
    e.state = busy_grid(rng);
    e.action = static_cast<int>(rng.uniform_index(kNumActions));
    e.target_return = rng.uniform(-1.0, 1.0);
    pool.push_back(std::move(e));
  }
  std::vector<const Experience*> batch;
  for (const Experience& e : pool) batch.push_back(&e);
  for (auto _ : state) {
    double loss = train_step(net, opt, batch);
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_BatchUpdate);

static void BM_SimStep(benchmark::State& state) {
  SimConfig cfg;
  cfg.rng_seed = 4;
  Simulation sim(ScenarioId::Challenge, cfg);
  int warm = 40;  // populate the lanes before measuring
  while (warm-- > 0) sim.step(EgoCommand::Wait);
  for (auto _ : state) {
    if (sim.terminated()) {
      state.PauseTiming();
      sim = Simulation(ScenarioId::Challenge, cfg);
      for (int i = 0; i < 40; ++i) sim.step(EgoCommand::Wait);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(sim.step(EgoCommand::Wait));
  }
}
BENCHMARK(BM_SimStep);

static void BM_GridEncode(benchmark::State& state) {
  SimConfig cfg;
  cfg.rng_seed = 5;
  Simulation sim(ScenarioId::Challenge, cfg);
  for (int i = 0; i < 40; ++i) sim.step(EgoCommand::Wait);
  const GridFrame& frame = default_grid_frame();
  for (auto _ : state) {
    OccupancyGrid g = encode(sim.state(), frame);
    benchmark::DoNotOptimize(g.data.data());
  }
}
BENCHMARK(BM_GridEncode);

static void BM_GreedyEpisode(benchmark::State& state) {
  Rng rng(6);
  QNetwork net = QNetwork::random_init(rng);
  SimConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    AgentEpisode ep =
        run_agent_episode(net, ScenarioId::Challenge, cfg, 0.0, seed++, nullptr);
    benchmark::DoNotOptimize(ep.total_reward);
  }
}
BENCHMARK(BM_GreedyEpisode)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
