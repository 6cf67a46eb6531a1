#include "escapelab/survival_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace escapelab {

SurvivalCurve::SurvivalCurve(std::vector<std::int64_t> times, std::vector<std::int64_t> survivors,
                             std::int64_t total, std::int64_t censored)
    : times_(std::move(times)), survivors_(std::move(survivors)), total_(total), censored_(censored) {
  if (times_.empty() || times_.size() != survivors_.size())
    throw std::invalid_argument("SurvivalCurve: grid/count size mismatch");
  for (std::size_t j = 1; j < survivors_.size(); ++j)
    if (survivors_[j] > survivors_[j - 1])
      throw std::invalid_argument("SurvivalCurve: survivor counts must be nonincreasing");
  if (survivors_.back() != censored_)
    throw std::invalid_argument("SurvivalCurve: survivors at the horizon must equal the censored count");
  if (survivors_.front() > total_) throw std::invalid_argument("SurvivalCurve: survivors exceed total");
}

std::vector<std::int64_t> SurvivalCurve::geometric_grid(std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("SurvivalCurve: horizon must be >= 1");
  std::vector<std::int64_t> grid;
  double v = 1.0;
  while (true) {
    const auto n = static_cast<std::int64_t>(std::llround(v));
    if (n >= n_max) break;
    if (grid.empty() || grid.back() != n) grid.push_back(n);
    v *= 1.1;
  }
  grid.push_back(n_max);
  return grid;
}

void SurvivalAccumulator::add_death(std::int64_t tau) {
  const auto it = std::lower_bound(grid->begin(), grid->end(), tau);
  // tau <= horizon by contract; deaths bin at the first grid point >= tau.
  deaths[static_cast<std::size_t>(it - grid->begin())] += 1;
  ++total;
}

void SurvivalAccumulator::merge(SurvivalAccumulator&& other) {
  for (std::size_t j = 0; j < deaths.size(); ++j) deaths[j] += other.deaths[j];
  censored += other.censored;
  total += other.total;
}

SurvivalCurve SurvivalAccumulator::finish() const {
  std::vector<std::int64_t> survivors(grid->size());
  std::int64_t alive = total;
  for (std::size_t j = 0; j < grid->size(); ++j) {
    alive -= deaths[j];
    survivors[j] = alive;
  }
  return SurvivalCurve(*grid, std::move(survivors), total, censored);
}

}  // namespace escapelab
