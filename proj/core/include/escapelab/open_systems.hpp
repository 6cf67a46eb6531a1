#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "escapelab/hole.hpp"
#include "escapelab/maps.hpp"
#include "escapelab/measure.hpp"
#include "escapelab/parallel.hpp"
#include "escapelab/rng.hpp"
#include "escapelab/survival_curve.hpp"
#include "escapelab/tower.hpp"

namespace escapelab {

// First hitting time tau(x) = inf{n >= 1 : f^n(x) in H}, capped at n_max.
template <IntervalMap M>
std::optional<std::int64_t> hitting_time(double x0, const Hole1D& hole, const M& map,
                                         std::int64_t n_max) {
  double x = x0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    x = map.eval(x);
    if (hole.contains(x)) return n;
  }
  return std::nullopt;
}

// Escape time e(x) = inf{n >= 0 : f^n(x) in H}: like the hitting time but the
// start itself counts.
template <IntervalMap M>
std::optional<std::int64_t> escape_time(double x0, const Hole1D& hole, const M& map,
                                        std::int64_t n_max) {
  if (hole.contains(x0)) return 0;
  return hitting_time(x0, hole, map, n_max);
}

std::optional<std::int64_t> hitting_time(const Point2& p0, const HoleCylinder& hole,
                                         const SolenoidMap& map, std::int64_t n_max);
std::optional<std::int64_t> escape_time(const Point2& p0, const HoleCylinder& hole,
                                        const SolenoidMap& map, std::int64_t n_max);

struct SurvivalConfig {
  std::int64_t n_samples = 0;
  std::int64_t n_max = 0;
  std::int64_t burn_in = 1000;
  std::uint64_t seed = 0;
  int workers = 0;
};

// Monte Carlo survival curve: independent invariant-measure starts, hitting
// times capped at the horizon, survivor counts on the geometric grid.
// Deterministic in (seed), whatever the worker count.
template <IntervalMap M>
SurvivalCurve survival_curve(const M& map, const Hole1D& hole, const SurvivalConfig& cfg) {
  const auto grid = SurvivalCurve::geometric_grid(cfg.n_max);
  SurvivalAccumulator init(grid);
  auto per_item = [&](SurvivalAccumulator& acc, std::int64_t idx) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(idx), stream_tag::survival);
    const double x0 = sample_invariant(map, cfg.burn_in, rng);
    if (const auto tau = hitting_time(x0, hole, map, cfg.n_max))
      acc.add_death(*tau);
    else
      acc.add_censored();
  };
  auto merge = [](SurvivalAccumulator& a, SurvivalAccumulator&& b) { a.merge(std::move(b)); };
  return block_parallel_reduce(cfg.n_samples, init, per_item, merge, cfg.workers).finish();
}

// Tower-routed variant for the intermittent map. Requires the hole to sit
// inside the base (a_m, 1]; between base visits the orbit stays at or below
// a_m, so hole membership only needs checking at base visits and whole
// horizon-length laminar climbs censor in O(log) time. Produces the same
// hitting times as the direct engine, whatever base index is chosen.
SurvivalCurve survival_curve_towered(const TowerModel& tower, const Hole1D& hole,
                                     const SurvivalConfig& cfg);

// Hitting time of the induced map f^R on the base: smallest j >= 1 with
// (f^R)^j(x0) in the hole.
std::optional<std::int64_t> induced_hitting_time(double x0, const Hole1D& hole,
                                                 const TowerModel& tower, std::int64_t j_max);

// Survival curve of the induced hitting time from invariant-measure starts
// conditioned on the base minus the hole (rejection sampling).
SurvivalCurve induced_hitting_survival(const TowerModel& tower, const Hole1D& hole,
                                       const SurvivalConfig& cfg);

// Survival curve for the skew product; starts are uniform on [0,1] x D with
// burn-in. With a full-fiber cylinder the z-coordinate never affects
// membership and hitting times coincide with the one-dimensional run on the
// same x start.
SurvivalCurve solenoid_survival(const SolenoidMap& map, const HoleCylinder& hole,
                                const SurvivalConfig& cfg);

// Ulam operator with the hole knocked out: rows and columns of every cell
// whose closure lies inside a hole component are zeroed. Cells that only
// partly overlap the hole stay closed, which under-approximates the hole.
struct OpenUlamOperator {
  UlamOperator op;                      // substochastic: hole rows/cols zeroed
  std::vector<std::uint8_t> hole_cell;  // 1 for removed cells
  std::int64_t n_hole_cells = 0;
};

OpenUlamOperator open_ulam(const UlamOperator& closed, const Hole1D& hole);

// Leading eigenvalue of the open operator by L1-normalized power iteration;
// lambda is the asymptotic mass-loss factor per step. Returns 0 with a zero
// density if the surviving mass vanishes.
struct EigenResult {
  double lambda = 0.0;
  GridDensity density;
  std::int64_t iterations = 0;
};

EigenResult leading_eigenvalue(const OpenUlamOperator& open, double tol = 1e-12,
                               std::int64_t iter_max = 100000);

}  // namespace escapelab
