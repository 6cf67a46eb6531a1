#include "escapelab/maps.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace escapelab {

namespace {

void require_unit_interval(double x, const char* who) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error(std::string(who) + ": argument " + std::to_string(x) +
                            " outside [0,1]");
}

}  // namespace

// ---- LsvMap ---------------------------------------------------------------

LsvMap::LsvMap(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("LsvMap: alpha must lie in (0,1), got " + std::to_string(alpha));
  if (alpha == 0.5)
    pow_kind_ = PowKind::half;
  else if (alpha == 2.0 / 3.0)
    pow_kind_ = PowKind::two_thirds;
  else
    pow_kind_ = PowKind::generic;
}

double LsvMap::pow_alpha(double u) const {
  switch (pow_kind_) {
    case PowKind::half: return std::sqrt(u);
    case PowKind::two_thirds: return std::cbrt(u * u);
    case PowKind::generic: return std::pow(u, alpha_);
  }
  return std::pow(u, alpha_);
}

double LsvMap::eval(double x) const {
  require_unit_interval(x, "LsvMap::eval");
  if (x <= 0.5) return eval_left(x);
  return 2.0 * x - 1.0;
}

double LsvMap::deriv(double x) const {
  require_unit_interval(x, "LsvMap::deriv");
  if (x <= 0.5) return deriv_left(x);
  return 2.0;
}

double LsvMap::left_inverse(double y) const {
  require_unit_interval(y, "LsvMap::left_inverse");
  if (y == 0.0) return 0.0;
  if (y == 1.0) return 0.5;

  // Bracketed bisection: g is strictly increasing on [0, 1/2].
  double lo = 0.0, hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (eval_left(mid) < y)
      lo = mid;
    else
      hi = mid;
  }

  // Newton polish; g' >= 1 everywhere so the step is well behaved. The
  // bracket above already guarantees 1e-12, Newton brings it to ~1e-14.
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 5; ++i) {
    const double f = eval_left(x) - y;
    const double step = f / deriv_left(x);
    x -= step;
    if (x < 0.0) x = 0.0;
    if (x > 0.5) x = 0.5;
    if (std::abs(step) < 1e-15) break;
  }
  return x;
}

// ---- FareyMap ---------------------------------------------------------------

FareyMap::FareyMap(double theta) : theta_(theta), inv_theta_(1.0 / theta) {
  if (!(theta > 1.0))
    throw std::invalid_argument("FareyMap: theta must exceed 1, got " + std::to_string(theta));
}

double FareyMap::t(double n) const {
  if (theta_ == 2.0) {
    return 1.0 / (n * n);
  }
  return std::pow(n, -theta_);
}

double FareyMap::a(double n) const {
  if (n <= 1e6) return t(n) - t(n + 1.0);
  // t_n - t_{n+1} = t_n * (1 - ((n+1)/n)^(-theta)); stable for large n.
  return t(n) * (-std::expm1(-theta_ * std::log1p(1.0 / n)));
}

double FareyMap::branch_index(double x) const {
  // x in (t_{n+1}, t_n]  <=>  n <= x^(-1/theta) < n+1.
  double n = std::floor(std::pow(x, -inv_theta_));
  if (n < 1.0) n = 1.0;
  while (n > 1.0 && x > t(n)) n -= 1.0;
  while (x <= t(n + 1.0)) n += 1.0;
  return n;
}

double FareyMap::eval(double x) const {
  require_unit_interval(x, "FareyMap::eval");
  if (x == 0.0) return 0.0;
  double v;
  if (x > t(2.0)) {
    v = (1.0 - x) / a(1.0);
  } else {
    const double n = branch_index(x);
    if (n <= 1e12) {
      v = a(n - 1.0) * (x - t(n + 1.0)) / a(n) + t(n);
    } else {
      // Deep in the laminar tail the branch ratio a_{n-1}/a_n is 1 to within
      // double precision; one affine step up the ladder.
      v = (x - t(n + 1.0)) + t(n);
    }
  }
  // Guard the last ulp at branch joints.
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  return v;
}

// ---- RotationMap ------------------------------------------------------------

RotationMap::RotationMap(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("RotationMap: gamma must lie in (0,1), got " +
                                std::to_string(gamma));
}

double RotationMap::golden() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// ---- SolenoidMap ------------------------------------------------------------

void validate(const Point2& p) {
  if (!(p.x >= 0.0 && p.x <= 1.0))
    throw std::domain_error("Point2: x outside [0,1]");
  if (!(std::abs(p.z) <= 1.0 + 1e-12))
    throw std::domain_error("Point2: |z| exceeds 1");
}

SolenoidMap::SolenoidMap(double alpha, double contraction)
    : base_(alpha), contraction_(contraction) {
  if (!(contraction > 0.0))
    throw std::invalid_argument("SolenoidMap: contraction must be positive");
  if (!(contraction * base_.sup_deriv() < 1.0 - contraction))
    throw std::invalid_argument(
        "SolenoidMap: need contraction * sup|Dg| < 1 - contraction, i.e. contraction < 1/(3+alpha)");
}

Point2 SolenoidMap::eval(const Point2& p) const {
  const double angle = 2.0 * std::numbers::pi * p.x;
  return Point2{base_.eval(p.x),
                contraction_ * p.z + 0.5 * std::complex<double>(std::cos(angle), std::sin(angle))};
}

}  // namespace escapelab
