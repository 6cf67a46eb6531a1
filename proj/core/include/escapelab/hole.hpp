#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "escapelab/maps.hpp"

namespace escapelab {

// Finite union of disjoint open intervals (lo, hi) in (0, 1]. Membership is
// strict on both sides, so boundary points survive. The infimum must stay
// away from 0 (the neutral fixed point never sits in the closure).
class Hole1D {
public:
  explicit Hole1D(std::vector<std::pair<double, double>> intervals);

  bool contains(double x) const {
    for (const auto& [lo, hi] : intervals_)
      if (x > lo && x < hi) return true;
    return false;
  }

  double inf() const { return intervals_.front().first; }
  double sup() const { return intervals_.back().second; }
  double total_length() const;

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

private:
  std::vector<std::pair<double, double>> intervals_;  // sorted by lo
};

struct Disk {
  std::complex<double> center{0.0, 0.0};
  double radius = 0.0;
};

// Cylinder hole for the skew product: x-part a Hole1D, z-part an optional
// open disk inside the unit disk. No disk means the full fiber, so only the
// x-coordinate decides membership.
class HoleCylinder {
public:
  HoleCylinder(Hole1D x_part, std::optional<Disk> disk = std::nullopt);

  bool contains(const Point2& p) const {
    if (!x_part_.contains(p.x)) return false;
    if (!disk_) return true;
    return std::abs(p.z - disk_->center) < disk_->radius;
  }

  const Hole1D& x_part() const { return x_part_; }
  const std::optional<Disk>& disk() const { return disk_; }

private:
  Hole1D x_part_;
  std::optional<Disk> disk_;
};

}  // namespace escapelab
