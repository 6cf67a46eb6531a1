#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "escapelab/maps.hpp"
#include "escapelab/parallel.hpp"
#include "escapelab/rng.hpp"
#include "escapelab/survival_curve.hpp"

namespace escapelab {

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// OLS of log(value) on log(n) over grid points inside the window.
struct PowerLawFit {
  double exponent = 0.0;
  double intercept = 0.0;  // natural log of the amplitude
  double stderr_ = 0.0;    // standard error of the exponent
  double r_squared = 0.0;
  FitWindow window;
  std::int64_t n_points = 0;
};

PowerLawFit fit_power_law(std::span<const std::int64_t> n, std::span<const double> value,
                          FitWindow window);
PowerLawFit fit_power_law(const SurvivalCurve& curve, FitWindow window);

// OLS of log(value) on n; rate is minus the slope.
struct ExponentialFit {
  double rate = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;  // standard error of the rate
  double r_squared = 0.0;
  FitWindow window;
  std::int64_t n_points = 0;
};

ExponentialFit fit_exponential_rate(std::span<const std::int64_t> n, std::span<const double> value,
                                    FitWindow window);
ExponentialFit fit_exponential_rate(const SurvivalCurve& curve, FitWindow window);

// Largest window hi such that every grid value inside [window.lo, hi] is
// positive; lets callers fit survival curves whose far tail has emptied out.
FitWindow clip_window_to_positive(const SurvivalCurve& curve, FitWindow window);

// Orbit sources for the statistics estimators: a state type, an init draw,
// one step (rng available for stochastic realizations; deterministic systems
// ignore it) and a coordinate readout.
template <class S>
concept OrbitSource = requires(const S& s, typename S::State st, Rng& rng) {
  { s.init(rng) } -> std::convertible_to<typename S::State>;
  { s.step(st, rng) } -> std::convertible_to<typename S::State>;
  { s.coord(st) } -> std::convertible_to<double>;
};

// Lebesgue start plus burn-in, then deterministic iteration of a 1D map.
template <IntervalMap M>
struct MapOrbit {
  const M* map;
  std::int64_t burn_in = 0;
  using State = double;
  State init(Rng& rng) const {
    double x = rng.uniform01();
    for (std::int64_t b = 0; b < burn_in; ++b) x = map->eval(x);
    return x;
  }
  State step(State s, Rng&) const { return map->eval(s); }
  double coord(State s) const { return s; }
};

// Doubling map realized on the binary expansion of an infinite-precision
// uniform start: the state keeps the leading 64 bits and each step shifts in
// one fresh bit. Plain double iteration would hit 0 after 53 steps.
struct ShiftDoublingOrbit {
  using State = std::uint64_t;
  State init(Rng& rng) const { return rng.next_u64(); }
  State step(State s, Rng& rng) const { return (s << 1) | (rng.next_u64() >> 63); }
  double coord(State s) const { return static_cast<double>(s >> 11) * 0x1.0p-53; }
};

// Probability that the running base-visit frequency ever strays from its mean
// by the threshold, over the truncated future [n, N_max]:
//   probabilities[g] = P( max_{n_grid[g] <= N <= N_max} |S_N / N - K| >= threshold )
// with S_N counting base visits among steps 0..N. Truncation at N_max makes
// this a lower bound for the untruncated statistic; N_max is recorded.
struct MaxDevCurve {
  std::vector<std::int64_t> n_grid;
  std::vector<double> probabilities;
  double k_value = 0.0;
  double threshold = 0.0;
  std::int64_t n_max = 0;
  std::int64_t n_samples = 0;
};

namespace detail {
inline void normalize_grid(std::vector<std::int64_t>& grid, std::int64_t n_max) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty() || grid.front() < 1 || grid.back() > n_max)
    throw std::invalid_argument("grid points must lie in [1, n_max]");
}
}  // namespace detail

template <class Orbit, class BasePred>
  requires OrbitSource<Orbit>
MaxDevCurve max_deviation_curve(const Orbit& orbit, BasePred in_base, double k_value,
                                double threshold, std::vector<std::int64_t> n_grid,
                                std::int64_t n_max, std::int64_t n_samples, std::uint64_t seed,
                                int workers = 0) {
  detail::normalize_grid(n_grid, n_max);
  struct Acc {
    std::vector<std::int64_t> exceed_counts;
  };
  Acc init;
  init.exceed_counts.assign(n_grid.size(), 0);

  auto per_item = [&](Acc& acc, std::int64_t idx) {
    Rng rng(seed, static_cast<std::uint64_t>(idx), stream_tag::max_dev);
    auto state = orbit.init(rng);
    std::int64_t visits = in_base(orbit.coord(state)) ? 1 : 0;  // m = 0 term
    std::int64_t last_exceed = 0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      state = orbit.step(state, rng);
      if (in_base(orbit.coord(state))) ++visits;
      const double dev = std::abs(static_cast<double>(visits) / static_cast<double>(n) - k_value);
      if (dev >= threshold) last_exceed = n;
    }
    // max over [n, N_max] exceeds the threshold iff some N >= n does.
    for (std::size_t g = 0; g < acc.exceed_counts.size(); ++g)
      if (n_grid[g] <= last_exceed) ++acc.exceed_counts[g];
  };
  auto merge = [](Acc& a, Acc&& b) {
    for (std::size_t g = 0; g < a.exceed_counts.size(); ++g) a.exceed_counts[g] += b.exceed_counts[g];
  };
  Acc out = block_parallel_reduce(n_samples, init, per_item, merge, workers, /*block_size=*/256);

  MaxDevCurve curve;
  curve.n_grid = std::move(n_grid);
  curve.probabilities.reserve(curve.n_grid.size());
  for (const auto c : out.exceed_counts)
    curve.probabilities.push_back(static_cast<double>(c) / static_cast<double>(n_samples));
  curve.k_value = k_value;
  curve.threshold = threshold;
  curve.n_max = n_max;
  curve.n_samples = n_samples;
  return curve;
}

// Monte Carlo 2p-norms of running Birkhoff averages of a mean-zero observable:
//   plain_norms[g] = || S_N / N ||_{2p}            at N = n_grid[g]
//   sup_norms[g]   = || sup_{N <= n <= N_max} |S_n / n| ||_{2p}
// The observable mean is estimated on the same trajectories in a first pass
// and subtracted. sup_norms >= plain_norms pointwise by construction.
struct NormCurve {
  std::vector<std::int64_t> n_grid;
  std::vector<double> plain_norms;
  std::vector<double> sup_norms;
  std::int64_t p = 1;
  std::int64_t n_max = 0;
  std::int64_t n_samples = 0;
  double observable_mean = 0.0;
};

namespace detail {
inline double int_pow(double x, std::int64_t k) {
  double r = 1.0;
  for (std::int64_t i = 0; i < k; ++i) r *= x;
  return r;
}
}  // namespace detail

template <class Orbit, class Phi>
  requires OrbitSource<Orbit>
NormCurve birkhoff_norm_curves(const Orbit& orbit, Phi phi, std::vector<std::int64_t> n_grid,
                               std::int64_t n_max, std::int64_t p, std::int64_t n_samples,
                               std::uint64_t seed, int workers = 0) {
  if (p < 1) throw std::invalid_argument("birkhoff_norm_curves: p must be a positive integer");
  detail::normalize_grid(n_grid, n_max);

  // Pass 1: empirical mean of phi along the same trajectories.
  struct MeanAcc {
    double sum = 0.0;
  };
  auto mean_item = [&](MeanAcc& acc, std::int64_t idx) {
    Rng rng(seed, static_cast<std::uint64_t>(idx), stream_tag::norms);
    auto state = orbit.init(rng);
    double s = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      state = orbit.step(state, rng);
      s += phi(orbit.coord(state));
    }
    acc.sum += s;
  };
  auto mean_merge = [](MeanAcc& a, MeanAcc&& b) { a.sum += b.sum; };
  const MeanAcc total =
      block_parallel_reduce(n_samples, MeanAcc{}, mean_item, mean_merge, workers, /*block_size=*/64);
  const double mean =
      total.sum / (static_cast<double>(n_samples) * static_cast<double>(n_max));

  // Pass 2: accumulate |S_N/N|^{2p} at grid points and the suffix maxima.
  struct NormAcc {
    std::vector<double> plain;
    std::vector<double> sup;
  };
  NormAcc init;
  init.plain.assign(n_grid.size(), 0.0);
  init.sup.assign(n_grid.size(), 0.0);

  const std::int64_t two_p = 2 * p;
  auto per_item = [&](NormAcc& acc, std::int64_t idx) {
    static thread_local std::vector<double> dev;
    dev.resize(static_cast<std::size_t>(n_max) + 1);
    Rng rng(seed, static_cast<std::uint64_t>(idx), stream_tag::norms);
    auto state = orbit.init(rng);
    double s = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      state = orbit.step(state, rng);
      s += phi(orbit.coord(state)) - mean;
      dev[static_cast<std::size_t>(n)] = std::abs(s / static_cast<double>(n));
    }
    double running_max = 0.0;
    std::size_t g = n_grid.size();
    for (std::int64_t n = n_max; n >= 1 && g > 0; --n) {
      running_max = std::max(running_max, dev[static_cast<std::size_t>(n)]);
      while (g > 0 && n_grid[g - 1] == n) {
        --g;
        acc.plain[g] += detail::int_pow(dev[static_cast<std::size_t>(n)], two_p);
        acc.sup[g] += detail::int_pow(running_max, two_p);
      }
    }
  };
  auto merge = [](NormAcc& a, NormAcc&& b) {
    for (std::size_t g = 0; g < a.plain.size(); ++g) {
      a.plain[g] += b.plain[g];
      a.sup[g] += b.sup[g];
    }
  };
  NormAcc out = block_parallel_reduce(n_samples, init, per_item, merge, workers, /*block_size=*/64);

  NormCurve curve;
  curve.n_grid = std::move(n_grid);
  curve.p = p;
  curve.n_max = n_max;
  curve.n_samples = n_samples;
  curve.observable_mean = mean;
  const double inv_two_p = 1.0 / static_cast<double>(two_p);
  for (std::size_t g = 0; g < curve.n_grid.size(); ++g) {
    curve.plain_norms.push_back(
        std::pow(out.plain[g] / static_cast<double>(n_samples), inv_two_p));
    curve.sup_norms.push_back(std::pow(out.sup[g] / static_cast<double>(n_samples), inv_two_p));
  }
  return curve;
}

}  // namespace escapelab
