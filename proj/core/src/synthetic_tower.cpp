#include "escapelab/synthetic_tower.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "escapelab/parallel.hpp"

namespace escapelab {

SyntheticTower::SyntheticTower(double beta) : beta_(beta) {
  if (!(beta > 1.0))
    throw std::invalid_argument("SyntheticTower: tail exponent beta must exceed 1");
  mean_return_ = 1.0 + std::riemann_zeta(beta);  // sum_{n>=0} P(R > n)
}

std::int64_t SyntheticTower::sample_return(Rng& rng) const {
  const double u = 1.0 - rng.uniform01();  // (0, 1]
  const double r = std::ceil(std::pow(u, -1.0 / beta_));
  // Denormal u can push r past integer range; such returns act as censoring
  // at any finite horizon anyway.
  if (r >= 9e18) return static_cast<std::int64_t>(9e18);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(r));
}

double SyntheticTower::tail(double n) const { return std::pow(n, -beta_); }

SurvivalCurve synthetic_tower_survival(const SyntheticTower& tower, double hole_mass,
                                       std::int64_t n_samples, std::int64_t n_max,
                                       std::uint64_t seed, int workers) {
  if (!(hole_mass > 0.0 && hole_mass <= 1.0))
    throw std::invalid_argument("synthetic_tower_survival: hole mass must lie in (0,1]");
  if (n_samples < 1 || n_max < 1)
    throw std::invalid_argument("synthetic_tower_survival: sample count and horizon must be positive");

  // Cumulative weights for the time-to-base distribution:
  //   P(D = d) = P(R > d-1) / E[R],  d = 1 .. n_max;  anything later is censored.
  std::vector<double> cum_d(static_cast<std::size_t>(n_max) + 1, 0.0);
  double run = 0.0;
  for (std::int64_t d = 1; d <= n_max; ++d) {
    run += tower.tail(static_cast<double>(d - 1) == 0.0 ? 1.0 : static_cast<double>(d - 1));
    cum_d[static_cast<std::size_t>(d)] = run;
  }

  // Hole [0, mass) realized on the 64-bit expansion.
  const double scaled = hole_mass * 0x1.0p64;
  const std::uint64_t hole_threshold =
      scaled >= 0x1.0p64 ? ~0ull : static_cast<std::uint64_t>(scaled);

  const auto grid = SurvivalCurve::geometric_grid(n_max);
  SurvivalAccumulator init(grid);

  auto per_item = [&](SurvivalAccumulator& acc, std::int64_t idx) {
    Rng rng(seed, static_cast<std::uint64_t>(idx), stream_tag::synthetic);
    const double v = rng.uniform01() * tower.mean_return();
    if (v >= cum_d.back()) {  // first level-0 visit past the horizon
      acc.add_censored();
      return;
    }
    const auto it = std::upper_bound(cum_d.begin() + 1, cum_d.end(), v);
    std::int64_t t = static_cast<std::int64_t>(it - cum_d.begin());

    std::uint64_t u = rng.next_u64();  // uniform base coordinate at the visit
    while (true) {
      if (u < hole_threshold) {
        acc.add_death(t);
        return;
      }
      t += tower.sample_return(rng);
      if (t > n_max) {
        acc.add_censored();
        return;
      }
      u = (u << 1) | (rng.next_u64() >> 63);  // doubling with bit reinjection
    }
  };
  auto merge = [](SurvivalAccumulator& a, SurvivalAccumulator&& b) { a.merge(std::move(b)); };

  return block_parallel_reduce(n_samples, init, per_item, merge, workers).finish();
}

}  // namespace escapelab
