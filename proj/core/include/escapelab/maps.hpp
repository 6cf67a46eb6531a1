#pragma once

#include <complex>
#include <concepts>
#include <cstdint>

namespace escapelab {

// Any one-dimensional map of the unit interval usable by the generic
// trajectory machinery.
template <class M>
concept IntervalMap = requires(const M& m, double x) {
  { m.eval(x) } -> std::convertible_to<double>;
};

// Intermittent interval map with a neutral fixed point at 0:
//
//   g(x) = x + 2^a x^(1+a)   on [0, 1/2]      (0 < a < 1)
//        = 2x - 1            on (1/2, 1]
//
// The left branch is evaluated as x * (1 + (2x)^a), which is the same
// expression rearranged so that g(1/2) = 1 and g'(1/2-) = 2 + a come out
// exact in floating point. Exponents 1/2 and 2/3 take sqrt/cbrt fast paths.
class LsvMap {
public:
  explicit LsvMap(double alpha);

  double alpha() const { return alpha_; }

  double eval(double x) const;

  // One-sided convention at the branch point: deriv(1/2) is the left-branch
  // value 2 + alpha.
  double deriv(double x) const;

  // Inverse of the left branch [0,1/2] -> [0,1]. Bisection to width 1e-12,
  // then a few Newton steps; absolute tolerance 1e-14.
  double left_inverse(double y) const;

  // sup |g'| over [0,1], attained at 1/2 from the left.
  double sup_deriv() const { return 2.0 + alpha_; }

private:
  enum class PowKind { half, two_thirds, generic };

  double pow_alpha(double u) const;  // u^alpha for u in [0,1]
  double eval_left(double x) const { return x * (1.0 + pow_alpha(2.0 * x)); }
  double deriv_left(double x) const { return 1.0 + (1.0 + alpha_) * pow_alpha(2.0 * x); }

  double alpha_;
  PowKind pow_kind_;

  friend class SolenoidMap;
  friend struct LsvLeftBranch;
};

// Left branch of LsvMap exposed as a callable for code that iterates the
// laminar phase directly.
struct LsvLeftBranch {
  const LsvMap* map;
  double operator()(double x) const { return map->eval_left(x); }
};

// Piecewise-affine interval map with countably many branches accumulating
// at 0. Branch endpoints are t_n = n^(-theta), theta > 1, so t_1 = 1 and
// branch n >= 2 carries [t_{n+1}, t_n] affinely onto [t_n, t_{n-1}]; the top
// branch (t_2, 1] maps onto [0, 1) by x -> (1-x)/a_1 with a_n = t_n - t_{n+1}.
class FareyMap {
public:
  explicit FareyMap(double theta);

  double theta() const { return theta_; }

  // t_n = n^(-theta); n passed as double so indices beyond 2^53 keep working.
  double t(double n) const;

  // a_n = t_n - t_{n+1} (>= 0, strictly positive for finite n). Direct
  // subtraction for small n, expm1 form once cancellation matters.
  double a(double n) const;

  // Branch index n >= 1 with t_{n+1} < x <= t_n, exact after local fix-up.
  double branch_index(double x) const;

  double eval(double x) const;

private:
  double theta_;
  double inv_theta_;
};

// Circle rotation x -> x + gamma (mod 1) on [0, 1).
class RotationMap {
public:
  explicit RotationMap(double gamma);

  double gamma() const { return gamma_; }

  double eval(double x) const {
    const double y = x + gamma_;
    return y >= 1.0 ? y - 1.0 : y;
  }

  // The canonical diophantine rotation number, (sqrt(5)-1)/2.
  static double golden();

private:
  double gamma_;
};

// Point of the solid torus [0,1] x D, D the closed unit disk.
struct Point2 {
  double x = 0.0;
  std::complex<double> z{0.0, 0.0};
};

// Throws std::domain_error unless x in [0,1] and |z| <= 1 (small slack for
// rounding). Trajectory entry points validate once; the dynamics keeps the
// iterates inside by construction.
void validate(const Point2& p);

// Uniformly hyperbolic skew product over the intermittent base:
//
//   f(x, z) = (g_a(x), c z + e^{2 pi i x} / 2)
//
// with contraction c > 0 small enough that c * sup|g_a'| < 1 - c.
class SolenoidMap {
public:
  SolenoidMap(double alpha, double contraction);

  const LsvMap& base() const { return base_; }
  double contraction() const { return contraction_; }

  Point2 eval(const Point2& p) const;

private:
  LsvMap base_;
  double contraction_;
};

}  // namespace escapelab
