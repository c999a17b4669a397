#include <set>

#include "crossway/rng.hpp"
#include "doctest.h"

using namespace crossway;

TEST_CASE("same seed reproduces the sequence") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.state_digest() == b.state_digest());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}

TEST_CASE("uniform stays in [0,1) and is roughly centered") {
  Rng rng(7);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform_index covers its range without bias") {
  Rng rng(11);
  std::array<int, 5> counts{};
  for (int i = 0; i < 50000; ++i) counts[rng.uniform_index(5)]++;
  for (int c : counts) CHECK(c == doctest::Approx(10000).epsilon(0.05));
}

TEST_CASE("uniform_index consumes a draw even for n = 1") {
  Rng rng(3);
  CHECK(rng.uniform_index(1) == 0);
  CHECK(rng.draw_count() == 1);
  CHECK(rng.uniform_index(0) == 0);
  CHECK(rng.draw_count() == 1);  // n = 0 has nothing to randomize
}

TEST_CASE("draw counter feeds the state digest") {
  Rng rng(9);
  const std::uint64_t before = rng.state_digest();
  rng.uniform();
  CHECK(rng.state_digest() != before);
}

TEST_CASE("derive_seed separates streams") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t stream = 0; stream < 200; ++stream) {
    seeds.insert(derive_seed(42, stream));
  }
  CHECK(seeds.size() == 200);
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  CHECK(derive_seed(42, 7) != derive_seed(43, 7));
}
