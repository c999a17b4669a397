#include <cmath>
#include <functional>
#include <vector>

#include "crossway/layers.hpp"
#include "crossway/rng.hpp"
#include "doctest.h"

using namespace crossway;

namespace {

// Central finite difference of a scalar function at x[i].
double numeric_grad(std::vector<double>& x, std::size_t i,
                    const std::function<double()>& f, double h = 1e-6) {
  const double saved = x[i];
  x[i] = saved + h;
  const double fp = f();
  x[i] = saved - h;
  const double fm = f();
  x[i] = saved;
  return (fp - fm) / (2.0 * h);
}

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -1.0,
                               double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("conv_forward on a hand-computed 3x3 case") {
  // 3x3 single-channel input, 2x2 kernel, stride 1, one filter.
  const ConvShape s{3, 3, 1, 2, 1, 1};
  REQUIRE(s.out_h() == 2);
  REQUIRE(s.out_w() == 2);
  const std::vector<double> in = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  // w[(ky*2+kx)] laid out kernel-position outer: [w00, w01, w10, w11].
  const std::vector<double> w = {1, 0, 0, -1};
  const std::vector<double> b = {0.5};
  std::vector<double> out(4, 0.0);
  conv_forward(s, in.data(), w.data(), b.data(), out.data());
  // Each output: in[y][x] - in[y+1][x+1] + 0.5.
  CHECK(out[0] == doctest::Approx(1 - 5 + 0.5));
  CHECK(out[1] == doctest::Approx(2 - 6 + 0.5));
  CHECK(out[2] == doctest::Approx(4 - 8 + 0.5));
  CHECK(out[3] == doctest::Approx(5 - 9 + 0.5));
}

TEST_CASE("conv stride-2 output addressing") {
  const ConvShape s{5, 5, 1, 3, 2, 1};
  REQUIRE(s.out_h() == 2);
  REQUIRE(s.out_w() == 2);
  std::vector<double> in(25, 0.0);
  in[0] = 1.0;  // only the top-left input cell
  std::vector<double> w(9, 0.0);
  w[0] = 2.0;  // kernel position (0,0)
  const std::vector<double> b = {0.0};
  std::vector<double> out(4, -1.0);
  conv_forward(s, in.data(), w.data(), b.data(), out.data());
  CHECK(out[0] == doctest::Approx(2.0));  // window at (0,0)
  CHECK(out[1] == doctest::Approx(0.0));  // window at (0,2) misses it
  CHECK(out[2] == doctest::Approx(0.0));
  CHECK(out[3] == doctest::Approx(0.0));
}

TEST_CASE("conv_backward agrees with finite differences") {
  const ConvShape s{6, 7, 2, 3, 2, 4};
  Rng rng(100);
  std::vector<double> in = random_vec(s.in_count(), rng);
  std::vector<double> w = random_vec(s.weight_count(), rng);
  std::vector<double> b = random_vec(s.filters, rng);
  const std::vector<double> dout = random_vec(s.out_count(), rng);

  // Scalar objective: dot(conv(in, w, b), dout).
  auto objective = [&] {
    std::vector<double> out(s.out_count());
    conv_forward(s, in.data(), w.data(), b.data(), out.data());
    double acc = 0.0;
    for (int i = 0; i < s.out_count(); ++i) acc += out[i] * dout[i];
    return acc;
  };

  std::vector<double> din(s.in_count(), 0.0), dw(s.weight_count(), 0.0),
      db(s.filters, 0.0);
  conv_backward(s, in.data(), w.data(), dout.data(), din.data(), dw.data(),
                db.data());

  for (std::size_t i = 0; i < w.size(); i += 7) {
    CHECK(rel_err(dw[i], numeric_grad(w, i, objective)) < 1e-6);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(rel_err(db[i], numeric_grad(b, i, objective)) < 1e-6);
  }
  for (std::size_t i = 0; i < in.size(); i += 5) {
    CHECK(rel_err(din[i], numeric_grad(in, i, objective)) < 1e-6);
  }
}

TEST_CASE("conv_backward accumulates instead of overwriting") {
  const ConvShape s{4, 4, 1, 2, 2, 2};
  Rng rng(3);
  std::vector<double> in = random_vec(s.in_count(), rng);
  std::vector<double> w = random_vec(s.weight_count(), rng);
  const std::vector<double> dout = random_vec(s.out_count(), rng);
  std::vector<double> dw(s.weight_count(), 0.0), db(s.filters, 0.0);
  conv_backward(s, in.data(), w.data(), dout.data(), nullptr, dw.data(), db.data());
  const std::vector<double> once = dw;
  conv_backward(s, in.data(), w.data(), dout.data(), nullptr, dw.data(), db.data());
  for (std::size_t i = 0; i < dw.size(); ++i) {
    CHECK(dw[i] == doctest::Approx(2.0 * once[i]).epsilon(1e-12));
  }
}

TEST_CASE("dense_forward on a hand-computed case") {
  // 3 inputs, 2 outputs, w[o*3+i].
  const std::vector<double> in = {1, 2, 3};
  const std::vector<double> w = {1, 0, -1, 0.5, 0.5, 0.5};
  const std::vector<double> b = {10, -10};
  std::vector<double> out(2);
  dense_forward(3, 2, in.data(), w.data(), b.data(), out.data());
  CHECK(out[0] == doctest::Approx(1 - 3 + 10));
  CHECK(out[1] == doctest::Approx(3.0 - 10));
}

TEST_CASE("dense_backward agrees with finite differences") {
  const int in_n = 9, out_n = 5;
  Rng rng(200);
  std::vector<double> in = random_vec(in_n, rng);
  std::vector<double> w = random_vec(in_n * out_n, rng);
  std::vector<double> b = random_vec(out_n, rng);
  const std::vector<double> dout = random_vec(out_n, rng);

  auto objective = [&] {
    std::vector<double> out(out_n);
    dense_forward(in_n, out_n, in.data(), w.data(), b.data(), out.data());
    double acc = 0.0;
    for (int i = 0; i < out_n; ++i) acc += out[i] * dout[i];
    return acc;
  };

  std::vector<double> din(in_n, 0.0), dw(in_n * out_n, 0.0), db(out_n, 0.0);
  dense_backward(in_n, out_n, in.data(), w.data(), dout.data(), din.data(),
                 dw.data(), db.data());
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(rel_err(dw[i], numeric_grad(w, i, objective)) < 1e-6);
  }
  for (int i = 0; i < out_n; ++i) {
    CHECK(rel_err(db[i], numeric_grad(b, i, objective)) < 1e-6);
  }
  for (int i = 0; i < in_n; ++i) {
    CHECK(rel_err(din[i], numeric_grad(in, i, objective)) < 1e-6);
  }
}

TEST_CASE("leaky relu takes the positive branch at zero") {
  CHECK(leaky_relu(0.0, 0.01) == 0.0);
  CHECK(leaky_relu_grad(0.0, 0.01) == 1.0);
  CHECK(leaky_relu(-2.0, 0.01) == doctest::Approx(-0.02));
  CHECK(leaky_relu_grad(-2.0, 0.01) == 0.01);
  CHECK(leaky_relu(3.0, 0.01) == 3.0);
}

TEST_CASE("leaky relu backward accumulates through the preactivation") {
  const std::vector<double> pre = {-1.0, 0.0, 2.0};
  const std::vector<double> dout = {1.0, 1.0, 1.0};
  std::vector<double> din = {5.0, 5.0, 5.0};
  leaky_relu_backward(3, 0.01, pre.data(), dout.data(), din.data());
  CHECK(din[0] == doctest::Approx(5.01));
  CHECK(din[1] == doctest::Approx(6.0));
  CHECK(din[2] == doctest::Approx(6.0));
}
