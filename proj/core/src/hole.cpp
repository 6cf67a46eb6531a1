#include "escapelab/hole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace escapelab {

Hole1D::Hole1D(std::vector<std::pair<double, double>> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw std::invalid_argument("Hole1D: needs at least one interval");
  std::sort(intervals_.begin(), intervals_.end());
  for (const auto& [lo, hi] : intervals_) {
    if (!(hi > lo))
      throw std::invalid_argument("Hole1D: interval (" + std::to_string(lo) + "," +
                                  std::to_string(hi) + ") has empty interior");
    if (!(lo > 0.0)) throw std::invalid_argument("Hole1D: intervals must stay away from 0");
    if (!(hi <= 1.0)) throw std::invalid_argument("Hole1D: intervals must lie inside (0,1]");
  }
  for (std::size_t i = 1; i < intervals_.size(); ++i)
    if (intervals_[i].first < intervals_[i - 1].second)
      throw std::invalid_argument("Hole1D: intervals overlap");
}

double Hole1D::total_length() const {
  double s = 0.0;
  for (const auto& [lo, hi] : intervals_) s += hi - lo;
  return s;
}

HoleCylinder::HoleCylinder(Hole1D x_part, std::optional<Disk> disk)
    : x_part_(std::move(x_part)), disk_(disk) {
  if (disk_) {
    if (!(disk_->radius > 0.0)) throw std::invalid_argument("HoleCylinder: disk radius must be positive");
    if (std::abs(disk_->center) + disk_->radius > 1.0)
      throw std::invalid_argument("HoleCylinder: disk must lie within the unit disk");
  }
}

}  // namespace escapelab
