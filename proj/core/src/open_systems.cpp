#include "escapelab/open_systems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "escapelab/errors.hpp"

namespace escapelab {

std::optional<std::int64_t> hitting_time(const Point2& p0, const HoleCylinder& hole,
                                         const SolenoidMap& map, std::int64_t n_max) {
  validate(p0);
  Point2 p = p0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    p = map.eval(p);
    if (hole.contains(p)) return n;
  }
  return std::nullopt;
}

std::optional<std::int64_t> escape_time(const Point2& p0, const HoleCylinder& hole,
                                        const SolenoidMap& map, std::int64_t n_max) {
  validate(p0);
  if (hole.contains(p0)) return 0;
  return hitting_time(p0, hole, map, n_max);
}

// ---- tower-routed survival ---------------------------------------------------

namespace {

// Hitting time from one start by first-return bookkeeping. Holes live inside
// the base, so only base visits are checked; climbs that would outlive the
// horizon censor without being iterated. nullopt = censored at n_max.
std::optional<std::int64_t> towered_hitting(double x0, const Hole1D& hole, const TowerModel& tower,
                                            std::int64_t n_max) {
  const LsvLeftBranch climb{&tower.map};
  const std::int64_t m = tower.base_index;
  double x = x0;
  std::int64_t now = 0;

  if (!tower.in_base(x)) {
    // Initial laminar segment: everything below the base is hole-free.
    const auto j = tower.a_seq.rung_below(x);
    if (!j) return std::nullopt;
    std::int64_t steps = *j - m;
    if (steps > n_max) return std::nullopt;
    for (std::int64_t s = 0; s < steps; ++s) x = climb(x);
    while (x <= tower.base_low) {  // rounding guard at the base boundary
      x = climb(x);
      if (++steps > n_max) return std::nullopt;
    }
    now = steps;
    if (hole.contains(x)) return now;
  }

  while (true) {
    double y;
    std::int64_t r;
    if (x <= 0.5) {
      y = climb(x);
      r = 1;
    } else {
      y = 2.0 * x - 1.0;
      r = 1;
      if (!(y > tower.base_low)) {
        const auto j = tower.a_seq.rung_below(y);
        if (!j) return std::nullopt;  // table covers the horizon, so the climb outlives it
        const std::int64_t steps = *j - m;
        if (now + 1 + steps > n_max) return std::nullopt;
        for (std::int64_t s = 0; s < steps; ++s) y = climb(y);
        r = 1 + steps;
        while (y <= tower.base_low) {
          y = climb(y);
          ++r;
        }
      }
    }
    now += r;
    if (now > n_max) return std::nullopt;
    x = y;
    if (hole.contains(x)) return now;
  }
}

}  // namespace

SurvivalCurve survival_curve_towered(const TowerModel& tower, const Hole1D& hole,
                                     const SurvivalConfig& cfg) {
  if (hole.inf() < tower.base_low)
    throw std::invalid_argument("survival_curve_towered: hole must sit inside the base (a_m, 1]");
  if (tower.a_seq.max_index() < tower.base_index + cfg.n_max)
    throw std::invalid_argument(
        "survival_curve_towered: tower a-sequence shorter than the horizon; rebuild with depth >= n_max");

  const auto grid = SurvivalCurve::geometric_grid(cfg.n_max);
  SurvivalAccumulator init(grid);
  auto per_item = [&](SurvivalAccumulator& acc, std::int64_t idx) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(idx), stream_tag::survival);
    const double x0 = sample_invariant(tower.map, cfg.burn_in, rng);
    if (const auto tau = towered_hitting(x0, hole, tower, cfg.n_max))
      acc.add_death(*tau);
    else
      acc.add_censored();
  };
  auto merge = [](SurvivalAccumulator& a, SurvivalAccumulator&& b) { a.merge(std::move(b)); };
  return block_parallel_reduce(cfg.n_samples, init, per_item, merge, cfg.workers).finish();
}

// ---- induced dynamics --------------------------------------------------------

std::optional<std::int64_t> induced_hitting_time(double x0, const Hole1D& hole,
                                                 const TowerModel& tower, std::int64_t j_max) {
  if (!tower.in_base(x0)) throw std::domain_error("induced_hitting_time: start outside the base");
  double x = x0;
  for (std::int64_t j = 1; j <= j_max; ++j) {
    x = induced_step(x, tower).first;
    if (hole.contains(x)) return j;
  }
  return std::nullopt;
}

SurvivalCurve induced_hitting_survival(const TowerModel& tower, const Hole1D& hole,
                                       const SurvivalConfig& cfg) {
  const auto grid = SurvivalCurve::geometric_grid(cfg.n_max);
  SurvivalAccumulator init(grid);
  auto per_item = [&](SurvivalAccumulator& acc, std::int64_t idx) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(idx), stream_tag::induced);
    // Invariant measure conditioned on base \ hole, by rejection.
    double x0 = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      x0 = sample_invariant(tower.map, cfg.burn_in, rng);
      if (tower.in_base(x0) && !hole.contains(x0)) {
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error("induced_hitting_survival: base \\ hole has negligible mass");
    if (const auto j = induced_hitting_time(x0, hole, tower, cfg.n_max))
      acc.add_death(*j);
    else
      acc.add_censored();
  };
  auto merge = [](SurvivalAccumulator& a, SurvivalAccumulator&& b) { a.merge(std::move(b)); };
  return block_parallel_reduce(cfg.n_samples, init, per_item, merge, cfg.workers).finish();
}

// ---- skew product survival ----------------------------------------------------

SurvivalCurve solenoid_survival(const SolenoidMap& map, const HoleCylinder& hole,
                                const SurvivalConfig& cfg) {
  const auto grid = SurvivalCurve::geometric_grid(cfg.n_max);
  SurvivalAccumulator init(grid);
  auto per_item = [&](SurvivalAccumulator& acc, std::int64_t idx) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(idx), stream_tag::solenoid);
    Point2 p{rng.uniform01(), sample_unit_disk(rng)};
    for (std::int64_t b = 0; b < cfg.burn_in; ++b) p = map.eval(p);
    for (std::int64_t n = 1; n <= cfg.n_max; ++n) {
      p = map.eval(p);
      if (hole.contains(p)) {
        acc.add_death(n);
        return;
      }
    }
    acc.add_censored();
  };
  auto merge = [](SurvivalAccumulator& a, SurvivalAccumulator&& b) { a.merge(std::move(b)); };
  return block_parallel_reduce(cfg.n_samples, init, per_item, merge, cfg.workers).finish();
}

// ---- open Ulam operator --------------------------------------------------------

OpenUlamOperator open_ulam(const UlamOperator& closed, const Hole1D& hole) {
  if (!(hole.inf() < closed.hi && hole.sup() > closed.lo))
    throw std::invalid_argument("open_ulam: hole does not meet the operator interval");

  std::vector<std::uint8_t> hole_cell(static_cast<std::size_t>(closed.n_cells), 0);
  std::int64_t n_hole = 0;
  for (std::int64_t i = 0; i < closed.n_cells; ++i) {
    const double c_lo = closed.cell_lo(i);
    const double c_hi = closed.cell_hi(i);
    for (const auto& [h_lo, h_hi] : hole.intervals()) {
      if (h_lo < c_lo && c_hi < h_hi) {  // closed cell inside the open component
        hole_cell[static_cast<std::size_t>(i)] = 1;
        ++n_hole;
        break;
      }
    }
  }
  if (n_hole == 0)
    throw std::invalid_argument("open_ulam: no grid cell lies fully inside the hole; refine the grid");

  OpenUlamOperator open;
  open.hole_cell = hole_cell;
  open.n_hole_cells = n_hole;
  open.op.lo = closed.lo;
  open.op.hi = closed.hi;
  open.op.n_cells = closed.n_cells;
  open.op.samples_per_cell = closed.samples_per_cell;
  open.op.row_ptr.reserve(static_cast<std::size_t>(closed.n_cells) + 1);
  open.op.row_ptr.push_back(0);
  for (std::int64_t i = 0; i < closed.n_cells; ++i) {
    if (!hole_cell[static_cast<std::size_t>(i)]) {
      for (std::int64_t k = closed.row_ptr[static_cast<std::size_t>(i)];
           k < closed.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
        const auto j = closed.col[static_cast<std::size_t>(k)];
        if (hole_cell[static_cast<std::size_t>(j)]) continue;
        open.op.col.push_back(j);
        open.op.val.push_back(closed.val[static_cast<std::size_t>(k)]);
      }
    }
    open.op.row_ptr.push_back(static_cast<std::int64_t>(open.op.col.size()));
  }
  return open;
}

EigenResult leading_eigenvalue(const OpenUlamOperator& open, double tol, std::int64_t iter_max) {
  const auto n = static_cast<std::size_t>(open.op.n_cells);
  std::vector<double> v(n, 0.0);
  std::int64_t live = open.op.n_cells - open.n_hole_cells;
  if (live <= 0) return EigenResult{0.0, GridDensity{open.op.lo, open.op.hi, v}, 0};
  for (std::size_t i = 0; i < n; ++i)
    if (!open.hole_cell[i]) v[i] = 1.0 / static_cast<double>(live);

  std::vector<double> next(n, 0.0);
  double lambda_prev = -1.0;
  for (std::int64_t it = 1; it <= iter_max; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = v[i];
      if (vi == 0.0) continue;
      for (std::int64_t k = open.op.row_ptr[i]; k < open.op.row_ptr[i + 1]; ++k)
        next[static_cast<std::size_t>(open.op.col[static_cast<std::size_t>(k)])] +=
            vi * open.op.val[static_cast<std::size_t>(k)];
    }
    double lambda = 0.0;
    for (const double u : next) lambda += u;  // v had unit mass
    if (lambda < 1e-300) {
      std::fill(next.begin(), next.end(), 0.0);
      return EigenResult{0.0, GridDensity{open.op.lo, open.op.hi, next}, it};
    }
    for (auto& u : next) u /= lambda;
    v.swap(next);
    if (it >= 2 && std::abs(lambda - lambda_prev) < tol)
      return EigenResult{lambda, GridDensity{open.op.lo, open.op.hi, v}, it};
    lambda_prev = lambda;
  }
  throw NonConvergenceError("leading_eigenvalue: no convergence within " +
                            std::to_string(iter_max) + " iterations");
}

}  // namespace escapelab
