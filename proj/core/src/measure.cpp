#include "escapelab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "escapelab/errors.hpp"
#include "escapelab/parallel.hpp"

namespace escapelab {

Point2 sample_invariant(const SolenoidMap& map, std::int64_t burn_in, Rng& rng) {
  Point2 p{rng.uniform01(), sample_unit_disk(rng)};
  for (std::int64_t i = 0; i < burn_in; ++i) p = map.eval(p);
  return p;
}

double UlamOperator::row_sum(std::int64_t i) const {
  double s = 0.0;
  for (std::int64_t k = row_ptr[static_cast<std::size_t>(i)];
       k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
    s += val[static_cast<std::size_t>(k)];
  return s;
}

UlamOperator ulam_matrix(const std::function<double(double)>& map, double lo, double hi,
                         std::int64_t n_cells, std::int64_t samples_per_cell, std::uint64_t seed,
                         int workers) {
  if (n_cells < 2) throw std::invalid_argument("ulam_matrix: need at least 2 cells");
  if (samples_per_cell < 1) throw std::invalid_argument("ulam_matrix: need samples in every cell");
  if (!(hi > lo)) throw std::invalid_argument("ulam_matrix: empty interval");

  const double w = (hi - lo) / static_cast<double>(n_cells);

  // Per-cell transition counts; rows are independent, so cells parallelize
  // with one stream per cell.
  using Row = std::map<std::int32_t, std::int64_t>;
  struct Acc {
    std::vector<Row> rows;
  };
  Acc init;
  init.rows.resize(static_cast<std::size_t>(n_cells));

  auto per_cell = [&](Acc& acc, std::int64_t i) {
    Rng rng(seed, static_cast<std::uint64_t>(i), stream_tag::ulam);
    Row& row = acc.rows[static_cast<std::size_t>(i)];
    const double cell_lo = lo + w * static_cast<double>(i);
    for (std::int64_t s = 0; s < samples_per_cell; ++s) {
      // One uniform point per stratum of the cell.
      const double x =
          cell_lo + w * ((static_cast<double>(s) + rng.uniform01()) / static_cast<double>(samples_per_cell));
      const double y = map(x);
      if (!(y >= lo - 1e-12 && y <= hi + 1e-12))
        throw std::runtime_error("ulam_matrix: image " + std::to_string(y) +
                                 " leaves the stated interval");
      auto j = static_cast<std::int64_t>(std::floor((y - lo) / w));
      j = std::clamp<std::int64_t>(j, 0, n_cells - 1);
      row[static_cast<std::int32_t>(j)] += 1;
    }
  };
  auto merge = [](Acc& a, Acc&& b) {
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      if (!b.rows[i].empty()) a.rows[i] = std::move(b.rows[i]);
  };

  Acc counts = block_parallel_reduce(n_cells, init, per_cell, merge, workers, /*block_size=*/16);

  UlamOperator op;
  op.lo = lo;
  op.hi = hi;
  op.n_cells = n_cells;
  op.samples_per_cell = samples_per_cell;
  op.row_ptr.reserve(static_cast<std::size_t>(n_cells) + 1);
  op.row_ptr.push_back(0);
  for (std::int64_t i = 0; i < n_cells; ++i) {
    for (const auto& [j, c] : counts.rows[static_cast<std::size_t>(i)]) {
      op.col.push_back(j);
      op.val.push_back(static_cast<double>(c) / static_cast<double>(samples_per_cell));
    }
    op.row_ptr.push_back(static_cast<std::int64_t>(op.col.size()));
  }
  return op;
}

double GridDensity::mass_of(double a, double b) const {
  if (weights.empty() || !(b > a)) return 0.0;
  const double w = (hi - lo) / static_cast<double>(weights.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double c_lo = lo + w * static_cast<double>(i);
    const double c_hi = c_lo + w;
    const double overlap = std::min(b, c_hi) - std::max(a, c_lo);
    if (overlap > 0.0) mass += weights[i] * (overlap / w);
  }
  return mass;
}

GridDensity stationary_density(const UlamOperator& op, double tol, std::int64_t iter_max) {
  const auto n = static_cast<std::size_t>(op.n_cells);
  std::vector<double> v(n, 1.0 / static_cast<double>(op.n_cells));
  std::vector<double> next(n, 0.0);

  for (std::int64_t it = 0; it < iter_max; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = v[i];
      if (vi == 0.0) continue;
      for (std::int64_t k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k)
        next[static_cast<std::size_t>(op.col[static_cast<std::size_t>(k)])] +=
            vi * op.val[static_cast<std::size_t>(k)];
    }
    double mass = 0.0, change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      mass += next[j];
      change += std::abs(next[j] - v[j]);
    }
    for (std::size_t j = 0; j < n; ++j) next[j] /= mass;  // guard drift; mass stays ~1
    v.swap(next);
    if (change < tol) return GridDensity{op.lo, op.hi, std::move(v)};
  }
  throw NonConvergenceError("stationary_density: no fixed point within " +
                            std::to_string(iter_max) + " iterations");
}

ReturnTailCurve return_tail(const TowerModel& tower, const std::vector<std::int64_t>& n_points) {
  const std::int64_t m = tower.base_index;
  const std::int64_t max_n = *std::max_element(n_points.begin(), n_points.end());
  const std::int64_t available = tower.a_seq.max_index() - m + 1;
  if (max_n > available)
    throw TowerDepthError("return_tail: a-sequence too short; need " + std::to_string(max_n + m) +
                          " elements");

  // Suffix sums over every integer n in [1, available]:
  //   tail(n) = a_{m+n-1}/2, so sum_{i>n} tail(i) = sum_{k > m+n-1} a_k / 2.
  // The part of the sum beyond the table is closed with a local power-law
  // extrapolation of the a-sequence (a_k ~ C k^s with s ~ -1/alpha).
  const std::int64_t last = tower.a_seq.max_index();
  double slope = -1.0 / tower.map.alpha();
  {
    const std::int64_t k_hi = last, k_lo = std::max<std::int64_t>(2, last / 2);
    if (k_hi > k_lo)
      slope = std::log(tower.a_seq[k_hi] / tower.a_seq[k_lo]) /
              std::log(static_cast<double>(k_hi) / static_cast<double>(k_lo));
  }
  double remainder = 0.0;
  if (slope < -1.0)
    remainder = 0.5 * tower.a_seq[last] * static_cast<double>(last) / (-slope - 1.0);

  std::vector<double> suffix(static_cast<std::size_t>(available) + 2, 0.0);
  suffix[static_cast<std::size_t>(available) + 1] = remainder;
  for (std::int64_t i = available; i >= 1; --i)
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i) + 1] + 0.5 * tower.a_seq[m + i - 1];

  ReturnTailCurve curve;
  curve.n = n_points;
  for (const std::int64_t n : n_points) {
    if (n < 0) throw std::invalid_argument("return_tail: n must be >= 0");
    if (n == 0) {
      curve.tail.push_back(1.0 - tower.base_low);  // whole base has R > 0
      curve.tail_sum.push_back(suffix[1]);
    } else {
      curve.tail.push_back(0.5 * tower.a_seq[m + n - 1]);
      curve.tail_sum.push_back(suffix[static_cast<std::size_t>(n) + 1]);
    }
  }
  return curve;
}

}  // namespace escapelab
