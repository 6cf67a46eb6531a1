#include "escapelab/stats.hpp"

#include <cmath>
#include <string>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {

struct Ols {
  double slope, intercept, stderr_slope, r_squared;
  std::int64_t n_points;
};

// Plain least squares of y on x with slope standard error from the residual
// variance; r_squared pinned to 1 for a degenerate (constant) response.
Ols least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw InsufficientDataError("fit: degenerate abscissa spread");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    rss += r * r;
  }
  const double dof = k - 2.0;
  const double stderr_slope = dof > 0.0 ? std::sqrt(rss / dof / sxx) : 0.0;
  const double r2 = syy > 1e-30 ? 1.0 - rss / syy : 1.0;
  return Ols{slope, intercept, stderr_slope, r2, static_cast<std::int64_t>(x.size())};
}

void collect_window(std::span<const std::int64_t> n, std::span<const double> value,
                    FitWindow window, bool log_abscissa, std::vector<double>& xs,
                    std::vector<double>& ys) {
  if (n.size() != value.size()) throw std::invalid_argument("fit: series size mismatch");
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto ni = static_cast<double>(n[i]);
    if (ni < window.lo || ni > window.hi) continue;
    if (!(value[i] > 0.0))
      throw NonPositiveValueError("fit: value " + std::to_string(value[i]) + " at n = " +
                                  std::to_string(n[i]) + " is not positive");
    xs.push_back(log_abscissa ? std::log(ni) : ni);
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 5)
    throw InsufficientDataError("fit: only " + std::to_string(xs.size()) +
                                " usable points in window");
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::int64_t> n, std::span<const double> value,
                          FitWindow window) {
  std::vector<double> xs, ys;
  collect_window(n, value, window, /*log_abscissa=*/true, xs, ys);
  const Ols ols = least_squares(xs, ys);
  return PowerLawFit{ols.slope, ols.intercept, ols.stderr_slope, ols.r_squared, window,
                     ols.n_points};
}

PowerLawFit fit_power_law(const SurvivalCurve& curve, FitWindow window) {
  std::vector<double> p;
  p.reserve(curve.size());
  for (std::size_t j = 0; j < curve.size(); ++j) p.push_back(curve.p_hat(j));
  return fit_power_law(curve.times(), p, window);
}

ExponentialFit fit_exponential_rate(std::span<const std::int64_t> n, std::span<const double> value,
                                    FitWindow window) {
  std::vector<double> xs, ys;
  collect_window(n, value, window, /*log_abscissa=*/false, xs, ys);
  const Ols ols = least_squares(xs, ys);
  return ExponentialFit{-ols.slope, ols.intercept, ols.stderr_slope, ols.r_squared, window,
                        ols.n_points};
}

ExponentialFit fit_exponential_rate(const SurvivalCurve& curve, FitWindow window) {
  std::vector<double> p;
  p.reserve(curve.size());
  for (std::size_t j = 0; j < curve.size(); ++j) p.push_back(curve.p_hat(j));
  return fit_exponential_rate(curve.times(), p, window);
}

FitWindow clip_window_to_positive(const SurvivalCurve& curve, FitWindow window) {
  double hi = window.lo;
  for (std::size_t j = 0; j < curve.size(); ++j) {
    const auto n = static_cast<double>(curve.times()[j]);
    if (n < window.lo || n > window.hi) continue;
    if (curve.survivors()[j] > 0) hi = std::max(hi, n);
  }
  return FitWindow{window.lo, hi};
}

}  // namespace escapelab
