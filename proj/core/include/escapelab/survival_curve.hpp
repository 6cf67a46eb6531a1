#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace escapelab {

// Survivor counts of a hitting-time experiment on a geometric time grid.
// survivors[j] counts trajectories with tau > times[j]; the last grid point
// is the horizon, so survivors.back() equals the censored count.
class SurvivalCurve {
public:
  SurvivalCurve(std::vector<std::int64_t> times, std::vector<std::int64_t> survivors,
                std::int64_t total, std::int64_t censored);

  // Powers of 1.1 rounded and deduplicated, always ending at n_max.
  static std::vector<std::int64_t> geometric_grid(std::int64_t n_max);

  const std::vector<std::int64_t>& times() const { return times_; }
  const std::vector<std::int64_t>& survivors() const { return survivors_; }
  std::int64_t total() const { return total_; }
  std::int64_t censored() const { return censored_; }
  std::int64_t horizon() const { return times_.back(); }

  double p_hat(std::size_t j) const {
    return static_cast<double>(survivors_[j]) / static_cast<double>(total_);
  }

  std::size_t size() const { return times_.size(); }

private:
  std::vector<std::int64_t> times_;
  std::vector<std::int64_t> survivors_;
  std::int64_t total_ = 0;
  std::int64_t censored_ = 0;
};

// Mergeable tally used by the trajectory engines: deaths are binned at the
// first grid point >= tau, censored trajectories survive the whole grid.
struct SurvivalAccumulator {
  explicit SurvivalAccumulator(const std::vector<std::int64_t>& grid)
      : grid(&grid), deaths(grid.size(), 0) {}

  void add_death(std::int64_t tau);
  void add_censored() {
    ++censored;
    ++total;
  }
  void merge(SurvivalAccumulator&& other);

  SurvivalCurve finish() const;

  const std::vector<std::int64_t>* grid;
  std::vector<std::int64_t> deaths;
  std::int64_t censored = 0;
  std::int64_t total = 0;
};

}  // namespace escapelab
