#pragma once

#include <cstdint>
#include <vector>

#include "escapelab/rng.hpp"
#include "escapelab/survival_curve.hpp"

namespace escapelab {

// Abstract first-return tower: doubling base map on [0,1), column heights
// drawn i.i.d. with the exact discrete tail P(R > n) = n^(-beta), n >= 1.
// Holes are base subintervals [0, mass) watched at level 0 only.
class SyntheticTower {
public:
  explicit SyntheticTower(double beta);

  double beta() const { return beta_; }
  double mean_return() const { return mean_return_; }  // E[R] = 1 + zeta(beta)

  // Inverse transform R = ceil(U^(-1/beta)).
  std::int64_t sample_return(Rng& rng) const;

  double tail(double n) const;  // P(R > n) = n^(-beta) for n >= 1

private:
  double beta_;
  double mean_return_;
};

// Survival curve of the first hit of (hole x {0}) from a stationary start.
//
// A stationary tower point is a size-biased column at a uniform level, so the
// time D to its first level-0 visit has P(D = d) proportional to P(R > d-1);
// points with D beyond the horizon are censored outright. Base coordinates
// are realized as 64-bit binary expansions with fresh bits shifted in, which
// is the doubling map run on an infinite-precision uniform start (plain
// double iteration would collapse to 0 after 53 steps).
SurvivalCurve synthetic_tower_survival(const SyntheticTower& tower, double hole_mass,
                                       std::int64_t n_samples, std::int64_t n_max,
                                       std::uint64_t seed, int workers = 0);

}  // namespace escapelab
