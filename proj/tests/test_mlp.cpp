#include <cmath>

#include "crossway/agent.hpp"
#include "crossway/mlp.hpp"
#include "crossway/rmsprop.hpp"
#include "doctest.h"

using namespace crossway;

namespace {
struct Sample {
  std::vector<double> state;
  int action;
  double target_return;
};
}  // namespace

TEST_CASE("hand-computed two-layer forward") {
  // 2 -> 2 -> 1 with slope 0.5 to make the leak visible.
  MlpNetwork net({2, 2, 1}, 0.5);
  std::vector<double>& p = net.params();
  // Layer 0: w[o*2+i] = {1, 1, -1, -1}, b = {0, 0}.
  p[0] = 1;
  p[1] = 1;
  p[2] = -1;
  p[3] = -1;
  // Layer 1: w = {1, 2}, b = {0.25}.
  p[6] = 1;
  p[7] = 2;
  p[8] = 0.25;
  const auto out = net.forward({3.0, 1.0});
  // Hidden pre = {4, -4} -> post = {4, -2}; out = 4 + 2*(-2) + 0.25 = 0.25.
  REQUIRE(out.size() == 1);
  CHECK(out[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("gradient check across every parameter") {
  Rng rng(23);
  MlpNetwork net = MlpNetwork::random_init({4, 6, 5, 3}, rng);
  std::vector<double> input = {0.3, -0.7, 0.1, 0.9};
  const std::vector<double> dout = {1.0, -2.0, 0.5};

  auto objective = [&] {
    const auto out = net.forward(input);
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * dout[i];
    return acc;
  };

  MlpNetwork::Cache cache;
  net.forward(input, &cache);
  std::vector<double> grads(net.params().size(), 0.0);
  net.backward(input, cache, dout, grads);

  std::vector<double>& p = net.params();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    const double h = 1e-6;
    p[i] = saved + h;
    const double fp = objective();
    p[i] = saved - h;
    const double fm = objective();
    p[i] = saved;
    const double numeric = (fp - fm) / (2.0 * h);
    const double scale = std::max({std::abs(numeric), std::abs(grads[i]), 1e-8});
    CHECK(std::abs(numeric - grads[i]) / scale < 1e-5);
  }
}

TEST_CASE("input size mismatches are rejected") {
  MlpNetwork net({3, 2});
  CHECK_THROWS_AS(net.forward({1.0, 2.0}), std::runtime_error);
}

TEST_CASE("cache mismatch is rejected") {
  Rng rng(29);
  MlpNetwork net = MlpNetwork::random_init({2, 3, 2}, rng);
  MlpNetwork::Cache cache;
  net.forward({1.0, 2.0}, &cache);
  std::vector<double> grads(net.params().size(), 0.0);
  CHECK_THROWS_AS(net.backward({1.0, 2.1}, cache, {1.0, 0.0}, grads),
                  std::logic_error);
}

TEST_CASE("train_step drives a supervised batch toward its targets") {
  Rng rng(31);
  MlpNetwork net = MlpNetwork::random_init({2, 8, 2}, rng);
  RmsProp opt(net.param_count(), 0.01, 0.95, 1e-6);

  const std::vector<Sample> data = {{{1.0, 0.0}, 0, 0.8},
                                    {{0.0, 1.0}, 1, -0.3},
                                    {{1.0, 1.0}, 0, 0.1}};
  std::vector<const Sample*> batch;
  for (const Sample& s : data) batch.push_back(&s);

  double first = train_step(net, opt, batch);
  double last = first;
  for (int i = 0; i < 300; ++i) last = train_step(net, opt, batch);
  CHECK(last < first * 0.01);
  CHECK(net.forward({1.0, 0.0})[0] == doctest::Approx(0.8).epsilon(0.05));
  CHECK(net.forward({0.0, 1.0})[1] == doctest::Approx(-0.3).epsilon(0.05));
}

TEST_CASE("train_step rejects an empty batch") {
  MlpNetwork net({2, 2});
  RmsProp opt(net.param_count());
  std::vector<const Sample*> empty;
  CHECK_THROWS_AS(train_step(net, opt, empty), std::runtime_error);
}
