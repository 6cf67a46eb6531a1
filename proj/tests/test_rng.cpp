#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "escapelab/parallel.hpp"
#include "escapelab/rng.hpp"

using namespace escapelab;

TEST_CASE("streams are reproducible and keyed") {
  Rng a(42, 7, 1), b(42, 7, 1), c(42, 8, 1), d(43, 7, 1);
  bool all_equal = true, any_equal_c = false, any_equal_d = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    all_equal &= (va == b.next_u64());
    any_equal_c |= (va == c.next_u64());
    any_equal_d |= (va == d.next_u64());
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_c);
  CHECK_FALSE(any_equal_d);
}

TEST_CASE("uniform01 stays in [0,1) and has a sane mean") {
  Rng rng(1, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000.0 - 0.5) < 0.005);
}

TEST_CASE("disk sampler lands inside the unit disk") {
  Rng rng(5, 0);
  for (int i = 0; i < 10000; ++i) CHECK(std::abs(sample_unit_disk(rng)) <= 1.0);
}

TEST_CASE("block reduction is independent of the worker count") {
  auto run = [](int workers) {
    struct Acc {
      double s = 0.0;
    };
    auto per = [](Acc& a, std::int64_t i) {
      a.s += std::sin(static_cast<double>(i)) / (1.0 + static_cast<double>(i));
    };
    auto merge = [](Acc& a, Acc&& b) { a.s += b.s; };
    return block_parallel_reduce(100000, Acc{}, per, merge, workers, 128).s;
  };
  const double w1 = run(1);
  const double w2 = run(2);
  const double w5 = run(5);
  CHECK(w1 == w2);
  CHECK(w1 == w5);
}
