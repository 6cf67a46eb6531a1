#include "escapelab/tower.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "escapelab/errors.hpp"

namespace escapelab {

std::optional<std::int64_t> ASequence::rung_below(double y) const {
  // values is strictly decreasing; find the first index with values[j] < y.
  const auto it = std::upper_bound(values.begin(), values.end(), y,
                                   [](double lhs, double rhs) { return lhs > rhs; });
  if (it == values.end()) return std::nullopt;  // y <= a_M: table exhausted
  return static_cast<std::int64_t>(it - values.begin());
}

ASequence compute_a_sequence(std::int64_t m_max, const LsvMap& map) {
  if (m_max < 1) throw std::invalid_argument("compute_a_sequence: m_max must be >= 1");
  ASequence seq;
  seq.alpha = map.alpha();
  seq.values.reserve(static_cast<std::size_t>(m_max) + 1);
  seq.values.push_back(1.0);
  for (std::int64_t k = 0; k < m_max; ++k) seq.values.push_back(map.left_inverse(seq.values.back()));
  return seq;
}

TowerModel make_tower(const LsvMap& map, std::int64_t base_index, std::int64_t depth) {
  if (base_index < 1) throw std::invalid_argument("make_tower: base index must be >= 1");
  TowerModel tower{map, base_index, 0.0, compute_a_sequence(base_index + std::max<std::int64_t>(depth, 1) + 1, map)};
  tower.base_low = tower.a_seq[base_index];
  return tower;
}

std::int64_t choose_base_index(const Hole1D& hole, const LsvMap& map, std::int64_t m_cap) {
  const double h = hole.inf();
  if (!(h > 0.0)) throw std::invalid_argument("choose_base_index: hole closure touches 0");
  double a = 1.0;
  std::int64_t m = 0;
  while (!(a < h)) {
    a = map.left_inverse(a);
    ++m;
    if (m > m_cap)
      throw std::runtime_error("choose_base_index: base index exceeds cap " + std::to_string(m_cap));
  }
  return m;
}

std::optional<std::int64_t> return_time_direct(double x, const TowerModel& tower, std::int64_t cap) {
  if (!tower.in_base(x)) throw std::domain_error("return_time_direct: point outside the base");
  double y = x;
  for (std::int64_t n = 1; n <= cap; ++n) {
    y = tower.map.eval(y);
    if (tower.in_base(y)) return n;
  }
  return std::nullopt;
}

std::int64_t return_time_symbolic(double x, const TowerModel& tower) {
  if (!tower.in_base(x)) throw std::domain_error("return_time_symbolic: point outside the base");
  if (x <= 0.5) return 1;  // left-branch base points step up one rung
  const double y = 2.0 * x - 1.0;
  if (y > tower.base_low) return 1;
  const auto j = tower.a_seq.rung_below(y);
  if (!j)
    throw TowerDepthError("return_time_symbolic: a-sequence too short for climb from " +
                          std::to_string(y) + "; rebuild the tower with larger depth");
  return 1 + (*j - tower.base_index);
}

std::pair<double, std::int64_t> induced_step(double x, const TowerModel& tower) {
  if (!tower.in_base(x)) throw std::domain_error("induced_step: point outside the base");
  if (x <= 0.5) return {tower.map.eval(x), 1};
  double y = 2.0 * x - 1.0;
  if (y > tower.base_low) return {y, 1};
  const auto j = tower.a_seq.rung_below(y);
  if (!j)
    throw TowerDepthError("induced_step: a-sequence too short for climb from " + std::to_string(y));
  std::int64_t r = 1 + (*j - tower.base_index);
  const LsvLeftBranch climb{&tower.map};
  for (std::int64_t s = 0; s < *j - tower.base_index; ++s) y = climb(y);
  // Rounding safety at the base boundary: the symbolic count can disagree by
  // one step when y sits within ~1e-14 of a rung endpoint.
  while (y <= tower.base_low) {
    y = climb(y);
    ++r;
  }
  return {y, r};
}

// ---- Markov cylinder refinement -------------------------------------------

namespace {

struct CylinderNode {
  double lo, hi;
  std::int64_t depth;
  std::int64_t target;  // image under F^depth is (a_target, a_{target-1}]
  std::vector<std::int64_t> itinerary;
};

// Inverse of one branch, applied to a value in that branch's image element.
double invert_branch(std::int64_t label, double v, const TowerModel& tower) {
  if (label < 0) return tower.map.left_inverse(v);  // rung branch: g_L^{-1}
  const std::int64_t j = label;
  for (std::int64_t s = 0; s < j - tower.base_index; ++s) v = tower.map.left_inverse(v);
  return 0.5 * (1.0 + v);
}

double pullback(const std::vector<std::int64_t>& itinerary, double v, const TowerModel& tower) {
  for (auto it = itinerary.rbegin(); it != itinerary.rend(); ++it) v = invert_branch(*it, v, tower);
  return v;
}

bool intersects_hole(double lo, double hi, const Hole1D& hole) {
  for (const auto& [h_lo, h_hi] : hole.intervals())
    if (h_lo < hi && lo < h_hi) return true;
  return false;
}

bool contained_in_hole(double lo, double hi, const Hole1D& hole) {
  for (const auto& [h_lo, h_hi] : hole.intervals())
    if (h_lo <= lo && hi <= h_hi) return true;
  return false;
}

}  // namespace

double apply_itinerary(double x, const std::vector<std::int64_t>& itinerary,
                       const TowerModel& tower) {
  const LsvLeftBranch left{&tower.map};
  for (const std::int64_t label : itinerary) {
    if (label < 0) {
      x = left(x);
    } else {
      x = 2.0 * x - 1.0;
      for (std::int64_t s = 0; s < label - tower.base_index; ++s) x = left(x);
    }
  }
  return x;
}

std::optional<MarkovCylinder> markov_cylinder_in(const Hole1D& hole, const TowerModel& tower,
                                                 std::int64_t depth_max) {
  constexpr std::int64_t kReturnCap = 1000000;   // deepest sub-branch enumerated
  constexpr std::int64_t kNodeCap = 200000;      // frontier guard
  constexpr double kWidthFloor = 1e-15;          // endpoint resolution

  const std::int64_t m = tower.base_index;
  std::deque<CylinderNode> frontier;
  for (std::int64_t i = 1; i <= m; ++i)
    frontier.push_back({tower.a_seq[i], tower.a_seq[i - 1], 0, i, {}});

  std::int64_t visited = 0;
  while (!frontier.empty()) {
    CylinderNode node = std::move(frontier.front());
    frontier.pop_front();
    if (++visited > kNodeCap) return std::nullopt;

    if (!intersects_hole(node.lo, node.hi, hole)) continue;
    if (contained_in_hole(node.lo, node.hi, hole))
      return MarkovCylinder{node.lo, node.hi, node.depth, node.itinerary, node.target};
    if (node.depth >= depth_max) continue;

    if (node.target >= 2) {
      // The whole element (a_i, a_{i-1}] is one rung branch: the cylinder does
      // not split, its future just moves one rung up.
      CylinderNode child = node;
      child.depth += 1;
      child.itinerary.push_back(-(node.target - 1));
      child.target -= 1;
      frontier.push_back(std::move(child));
      continue;
    }

    // target == 1: split along the sub-branches of (1/2, 1]. Children march
    // monotonically down toward the pullback of 1/2+, so stop once they fall
    // below every hole component or below endpoint resolution.
    for (std::int64_t j = 1; j - m <= kReturnCap; ++j) {
      if (j > tower.a_seq.max_index())
        throw TowerDepthError("markov_cylinder_in: a-sequence too short for sub-branch refinement");
      const double d_lo = 0.5 * (1.0 + tower.a_seq[j]);
      const double d_hi = 0.5 * (1.0 + tower.a_seq[j - 1]);
      const double c_lo = pullback(node.itinerary, d_lo, tower);
      const double c_hi = pullback(node.itinerary, d_hi, tower);
      if (c_hi <= hole.inf()) break;
      if (c_hi - c_lo < kWidthFloor) break;
      if (!intersects_hole(c_lo, c_hi, hole)) continue;
      CylinderNode child;
      child.lo = c_lo;
      child.hi = c_hi;
      child.depth = node.depth + 1;
      child.target = std::min(j, m);
      child.itinerary = node.itinerary;
      child.itinerary.push_back(j);
      frontier.push_back(std::move(child));
    }
  }
  return std::nullopt;
}

}  // namespace escapelab
