#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "escapelab/hole.hpp"
#include "escapelab/maps.hpp"

namespace escapelab {

// Backward orbit of 1 under the left branch: a_0 = 1, a_{k+1} = g_L^{-1}(a_k),
// so a_1 = 1/2 and g(a_{k+1}) = a_k. Strictly decreasing toward 0 with
// a_k ~ (alpha 2^alpha k)^(-1/alpha).
struct ASequence {
  std::vector<double> values;
  double alpha = 0.0;

  std::int64_t max_index() const { return static_cast<std::int64_t>(values.size()) - 1; }
  double operator[](std::int64_t k) const { return values[static_cast<std::size_t>(k)]; }

  // The rung index j >= 1 with a_j < y <= a_{j-1}; nullopt once y falls at or
  // below the end of the table (climbs longer than the table resolves).
  std::optional<std::int64_t> rung_below(double y) const;
};

ASequence compute_a_sequence(std::int64_t m_max, const LsvMap& map);

// First-return structure over the base (a_m, 1]. Tower levels are never
// materialized: a tower point is just its current interval coordinate, and
// level-0 visits coincide with base visits of the orbit.
struct TowerModel {
  LsvMap map;
  std::int64_t base_index = 0;  // m
  double base_low = 0.0;        // a_m
  ASequence a_seq;

  bool in_base(double x) const { return x > base_low && x <= 1.0; }
};

// a_seq long enough to resolve climbs of `depth` steps beyond the base.
TowerModel make_tower(const LsvMap& map, std::int64_t base_index, std::int64_t depth);

// Minimal m with a_m < inf(hole), so that the hole sits inside (a_m, 1].
std::int64_t choose_base_index(const Hole1D& hole, const LsvMap& map, std::int64_t m_cap = 1000000);

// First return time R(x) = inf{n >= 1 : f^n(x) in (a_m, 1]} by direct
// iteration; nullopt if the return would exceed `cap`. Test oracle for the
// symbolic path.
std::optional<std::int64_t> return_time_direct(double x, const TowerModel& tower, std::int64_t cap);

// Same R(x) by branch lookup: left-branch base points step up one rung and
// stay in the base (R = 1); right-branch points land at f(x) = 2x - 1 in some
// rung (a_j, a_{j-1}] and then need j - m climbing steps, so R = 1 + (j - m)
// when j > m. Throws TowerDepthError when the a-sequence is too short.
std::int64_t return_time_symbolic(double x, const TowerModel& tower);

// One step of the induced map: (f^{R(x)}(x), R(x)). The climb is iterated
// through the left branch because the landing coordinate has no closed form.
std::pair<double, std::int64_t> induced_step(double x, const TowerModel& tower);

// Element of the induced-map cylinder refinement: (lo, hi] maps bijectively
// onto a full rung element of the base partition after `depth` induced steps.
// Itinerary labels: -k for the rung branch on (a_{k+1}, a_k], +j for the
// sub-branch of (1/2, 1] whose image under f is (a_j, a_{j-1}].
struct MarkovCylinder {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t depth = 0;
  std::vector<std::int64_t> itinerary;
  std::int64_t target_element = 0;  // image is (a_i, a_{i-1}] with i = target_element
};

// Breadth-first refinement of the induced branch partition, pruned to
// cylinders meeting the hole; returns the first cylinder contained in a hole
// component (up to the half-open boundary convention), or nullopt if none
// exists up to depth_max.
std::optional<MarkovCylinder> markov_cylinder_in(const Hole1D& hole, const TowerModel& tower,
                                                 std::int64_t depth_max);

// Applies the branch maps of a cylinder itinerary to a point of its closure;
// used to verify the bijective-landing property from exact endpoints.
double apply_itinerary(double x, const std::vector<std::int64_t>& itinerary,
                       const TowerModel& tower);

}  // namespace escapelab
