#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "escapelab/maps.hpp"
#include "escapelab/rng.hpp"

using namespace escapelab;

namespace {

// Test-local root finder, independent of LsvMap::left_inverse: plain
// bisection on the closed-form left branch.
double bisect_left_branch(double y, double alpha) {
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid + std::pow(2.0, alpha) * std::pow(mid, 1.0 + alpha);
    if (g < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("LSV construction validates alpha") {
  CHECK_THROWS_AS(LsvMap{0.0}, std::invalid_argument);
  CHECK_THROWS_AS(LsvMap{1.0}, std::invalid_argument);
  CHECK_THROWS_AS(LsvMap{-0.2}, std::invalid_argument);
  CHECK_NOTHROW(LsvMap{0.999});
}

TEST_CASE("LSV evaluation matches the branch formulas") {
  for (const double alpha : {0.1, 0.5, 2.0 / 3.0, 0.9}) {
    const LsvMap map(alpha);
    CHECK(map.eval(0.0) == 0.0);            // neutral fixed point
    CHECK(map.eval(0.5) == 1.0);            // 2^a (1/2)^{1+a} = 1/2 exactly
    CHECK(map.eval(0.75) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(map.eval(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(map.eval(-0.01), std::domain_error);
    CHECK_THROWS_AS(map.eval(1.01), std::domain_error);
  }
  // Extended-precision oracle: 0.25 + 2^0.5 * 0.25^1.5.
  const LsvMap half(0.5);
  CHECK(half.eval(0.25) == doctest::Approx(0.42677669529663689).epsilon(1e-15));
}

TEST_CASE("LSV derivative and its sup") {
  const LsvMap map(0.5);
  CHECK(map.deriv(0.0) == 1.0);   // unit derivative at the neutral point
  CHECK(map.deriv(0.75) == 2.0);  // affine right branch
  CHECK(map.deriv(0.5) == 2.5);   // left-branch value at the branch point

  // Grid-maximize as an independent check of sup_deriv.
  double best = 0.0;
  for (int i = 0; i <= 200000; ++i) best = std::max(best, map.deriv(i / 200000.0 * 0.5));
  CHECK(best == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(map.sup_deriv() == 2.5);
}

TEST_CASE("LSV left inverse: endpoints, oracle value, round trip") {
  const LsvMap map(0.5);
  CHECK(map.left_inverse(0.0) == 0.0);
  CHECK(map.left_inverse(1.0) == 0.5);

  // Bisection oracle on x + sqrt(2) x^1.5 = 1/2 (mpmath: 0.28492014549902663).
  const double oracle = bisect_left_branch(0.5, 0.5);
  CHECK(std::abs(map.left_inverse(0.5) - oracle) < 1e-12);
  CHECK(map.left_inverse(0.5) == doctest::Approx(0.28492014549902663).epsilon(1e-12));

  for (const double alpha : {0.3, 0.5, 2.0 / 3.0, 0.85}) {
    const LsvMap m(alpha);
    Rng rng(11, static_cast<std::uint64_t>(alpha * 1000));
    for (int i = 0; i < 10000; ++i) {
      const double y = rng.uniform01();
      const double x = m.left_inverse(y);
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 0.5);
      REQUIRE(std::abs(m.eval(x) - y) <= 1e-12);
    }
  }
}

TEST_CASE("LSV branch continuity and monotonicity") {
  const LsvMap map(0.7);
  CHECK(map.eval(0.5) == 1.0);
  CHECK(map.eval(0.5 - 1e-12) > 1.0 - 1e-11);  // continuous from the left at 1/2
  CHECK(map.eval(std::nextafter(0.5, 1.0)) < 1e-15);

  Rng rng(12, 0);
  for (int i = 0; i < 10000; ++i) {
    const double a = 0.5 * rng.uniform01();
    const double b = 0.5 * rng.uniform01();
    const auto [x, y] = std::minmax(a, b);
    if (x < y) REQUIRE(map.eval(x) < map.eval(y));
    const double u = 0.5 + 0.5 * rng.uniform01();
    const double v = 0.5 + 0.5 * rng.uniform01();
    const auto [s, t] = std::minmax(u, v);
    if (s > 0.5 && s < t) REQUIRE(map.eval(s) < map.eval(t));
  }
}

TEST_CASE("Farey construction and sequences") {
  CHECK_THROWS_AS(FareyMap{1.0}, std::invalid_argument);
  CHECK_THROWS_AS(FareyMap{0.5}, std::invalid_argument);
  const FareyMap map(2.0);
  CHECK(map.t(1) == 1.0);
  CHECK(map.t(2) == 0.25);
  CHECK(map.a(1) == 0.75);
  // a_n = t_n - t_{n+1} and strictly decreasing t_n.
  for (double n = 1; n < 10000; n += 17) {
    REQUIRE(map.t(n + 1) < map.t(n));
    REQUIRE(map.a(n) == doctest::Approx(map.t(n) - map.t(n + 1)).epsilon(1e-12));
    REQUIRE(map.a(n) >= 0.0);
  }
}

TEST_CASE("Farey evaluation: branch endpoints and the affine ladder") {
  const FareyMap map(2.0);
  CHECK(map.eval(0.0) == 0.0);
  CHECK(map.eval(1.0) == 0.0);                                      // (1-1)/a_1
  CHECK(map.eval(0.25) == doctest::Approx(1.0).epsilon(1e-14));     // top of branch at t_2
  CHECK(map.eval(1.0 / 9.0) == doctest::Approx(0.25).epsilon(1e-13));  // F(t_3) = t_2
  CHECK(map.eval(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(map.eval(-0.1), std::domain_error);
  CHECK_THROWS_AS(map.eval(1.1), std::domain_error);
}

TEST_CASE("Farey branch cover is exact") {
  for (const double theta : {1.5, 2.0, 3.0}) {
    const FareyMap map(theta);
    Rng rng(13, static_cast<std::uint64_t>(theta * 10));
    for (int i = 0; i < 10000; ++i) {
      double x = rng.uniform01();
      if (x == 0.0) x = 0.5;
      const double n = map.branch_index(x);
      REQUIRE(n >= 1.0);
      REQUIRE(x <= map.t(n));
      REQUIRE(x > map.t(n + 1));
    }
  }
}

TEST_CASE("rotation map") {
  CHECK_THROWS_AS(RotationMap{0.0}, std::invalid_argument);
  CHECK_THROWS_AS(RotationMap{1.0}, std::invalid_argument);
  const RotationMap half(0.5);
  CHECK(half.eval(0.0) == 0.5);
  CHECK(half.eval(0.75) == doctest::Approx(0.25).epsilon(1e-15));  // wraparound
  const RotationMap golden(RotationMap::golden());
  CHECK(golden.eval(0.1) == doctest::Approx(0.71803398874989482).epsilon(1e-15));
}

TEST_CASE("rotation preserves Lebesgue measure empirically") {
  const RotationMap map(RotationMap::golden());
  constexpr int kBins = 20;
  constexpr std::int64_t kSteps = 1000000;
  std::vector<std::int64_t> counts(kBins, 0);
  double x = 0.2;
  for (std::int64_t i = 0; i < kSteps; ++i) {
    x = map.eval(x);
    counts[static_cast<std::size_t>(x * kBins)] += 1;
  }
  const double expect = 1.0 / kBins;
  const double tol = 5.0 * std::sqrt(expect * (1.0 - expect) / kSteps);  // binomial scale
  for (const auto c : counts)
    CHECK(std::abs(static_cast<double>(c) / kSteps - expect) < tol);
}

TEST_CASE("solenoid parameter validation brackets 1/(3+alpha)") {
  for (const double alpha : {0.3, 0.5, 0.8}) {
    const double cap = 1.0 / (3.0 + alpha);
    Rng rng(14, static_cast<std::uint64_t>(alpha * 100));
    for (int i = 0; i < 100; ++i) {
      const double u = 1e-9 + 0.5 * rng.uniform01();
      CHECK_THROWS_AS(SolenoidMap(alpha, cap * (1.0 + u)), std::invalid_argument);
      CHECK_NOTHROW(SolenoidMap(alpha, cap * (1.0 - u)));
    }
  }
  CHECK_THROWS_AS(SolenoidMap(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("solenoid evaluation") {
  const SolenoidMap map(0.5, 0.2);

  const Point2 origin{0.0, {0.0, 0.0}};
  const Point2 image = map.eval(origin);
  CHECK(image.x == 0.0);
  CHECK(std::abs(image.z - std::complex<double>{0.5, 0.0}) < 1e-15);  // e^0 / 2

  // e^{2 pi i 3/4} = -i.
  const Point2 q = map.eval(Point2{0.75, {0.0, 0.0}});
  CHECK(q.x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(q.z - std::complex<double>{0.0, -0.5}) < 1e-15);

  // Extended-precision oracle for both coordinates.
  const Point2 r = map.eval(Point2{0.25, {0.1, 0.0}});
  CHECK(r.x == doctest::Approx(0.42677669529663689).epsilon(1e-15));
  CHECK(std::abs(r.z - std::complex<double>{0.02, 0.5}) < 1e-15);

  // The fiber image stays well inside the disk.
  Rng rng(15, 0);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{rng.uniform01(), sample_unit_disk(rng)};
    CHECK(std::abs(map.eval(p).z) <= 0.2 + 0.5 + 1e-12);
  }
}

TEST_CASE("solenoid fiber contraction is exactly the contraction factor") {
  const SolenoidMap map(0.5, 0.2);
  Rng rng(16, 0);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform01();
    const auto z1 = sample_unit_disk(rng);
    const auto z2 = sample_unit_disk(rng);
    const double before = std::abs(z1 - z2);
    const double after = std::abs(map.eval(Point2{x, z1}).z - map.eval(Point2{x, z2}).z);
    REQUIRE(std::abs(after - 0.2 * before) <= 1e-14);
  }
}

TEST_CASE("Point2 validation") {
  CHECK_NOTHROW(validate(Point2{0.5, {0.3, -0.4}}));
  CHECK_THROWS_AS(validate(Point2{-0.1, {0.0, 0.0}}), std::domain_error);
  CHECK_THROWS_AS(validate(Point2{1.1, {0.0, 0.0}}), std::domain_error);
  CHECK_THROWS_AS(validate(Point2{0.5, {0.9, 0.9}}), std::domain_error);
}
