#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "escapelab/maps.hpp"
#include "escapelab/rng.hpp"
#include "escapelab/tower.hpp"

namespace escapelab {

// One independent draw from the invariant measure: Lebesgue-uniform start
// followed by burn_in iterations. Distinct rng streams give independent
// samples.
template <IntervalMap M>
double sample_invariant(const M& map, std::int64_t burn_in, Rng& rng) {
  double x = rng.uniform01();
  for (std::int64_t i = 0; i < burn_in; ++i) x = map.eval(x);
  return x;
}

Point2 sample_invariant(const SolenoidMap& map, std::int64_t burn_in, Rng& rng);

// Ulam discretization of a map of (lo, hi] into itself: row i holds the
// empirical transition law of cell i under stratified within-cell sampling.
// Rows are stored CSR-style and each sums to 1.
struct UlamOperator {
  double lo = 0.0, hi = 0.0;
  std::int64_t n_cells = 0;
  std::int64_t samples_per_cell = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;

  double width() const { return (hi - lo) / static_cast<double>(n_cells); }
  double cell_lo(std::int64_t i) const { return lo + width() * static_cast<double>(i); }
  double cell_hi(std::int64_t i) const { return lo + width() * static_cast<double>(i + 1); }
  double row_sum(std::int64_t i) const;
};

// Throws std::runtime_error if any sample image leaves [lo, hi] (the induced
// map returns to the base by construction, so an excursion means the caller
// passed the wrong interval).
UlamOperator ulam_matrix(const std::function<double(double)>& map, double lo, double hi,
                         std::int64_t n_cells, std::int64_t samples_per_cell, std::uint64_t seed,
                         int workers = 0);

// Probability weights on the Ulam grid, normalized to 1.
struct GridDensity {
  double lo = 0.0, hi = 0.0;
  std::vector<double> weights;

  double mass_of(double a, double b) const;  // mass of [a,b] by cell overlap
};

// Left fixed vector of the row-stochastic operator by power iteration from
// the uniform density; stops when the L1 change drops below tol.
GridDensity stationary_density(const UlamOperator& op, double tol = 1e-12,
                               std::int64_t iter_max = 100000);

// Estimated invariant mass of the base interval, with batch-means stderr.
struct BaseMass {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_samples = 0;
};

template <IntervalMap M>
BaseMass base_mass(const M& map, double base_lo, double base_hi, std::int64_t n_orbit,
                   std::int64_t burn_in, Rng& rng) {
  constexpr std::int64_t kBatch = 1000;
  const std::int64_t n_batches = n_orbit / kBatch;
  if (n_batches < 2) throw std::invalid_argument("base_mass: orbit too short for batch means");

  double x = sample_invariant(map, burn_in, rng);
  std::vector<double> batch_means;
  batch_means.reserve(static_cast<std::size_t>(n_batches));
  for (std::int64_t b = 0; b < n_batches; ++b) {
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < kBatch; ++i) {
      x = map.eval(x);
      if (x > base_lo && x <= base_hi) ++hits;
    }
    batch_means.push_back(static_cast<double>(hits) / static_cast<double>(kBatch));
  }

  double mean = 0.0;
  for (const double b : batch_means) mean += b;
  mean /= static_cast<double>(n_batches);
  double var = 0.0;
  for (const double b : batch_means) var += (b - mean) * (b - mean);
  var /= static_cast<double>(n_batches - 1);

  return BaseMass{mean, std::sqrt(var / static_cast<double>(n_batches)), n_batches * kBatch};
}

// Exact Lebesgue tail of the first-return time on the base, read off the
// a-sequence: for n >= 1 only right-branch points return late, and
// Leb{x in base : R(x) > n} = a_{m+n-1} / 2. tail_sum[j] carries the partial
// sums over i > n of the tail, closed with a power-law extrapolation of the
// table remainder.
struct ReturnTailCurve {
  std::vector<std::int64_t> n;
  std::vector<double> tail;
  std::vector<double> tail_sum;
};

ReturnTailCurve return_tail(const TowerModel& tower, const std::vector<std::int64_t>& n_points);

}  // namespace escapelab
