#include "evflex/utility/utility_curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evflex {

namespace {

std::string segment_message(int k, const std::string& what) {
  std::ostringstream s;
  s << "segment " << k << ": " << what;
  return s.str();
}

}  // namespace

UtilityCurve UtilityCurve::from_values(std::vector<double> breakpoints, std::vector<double> upper_values,
                                       std::vector<double> lower_values) {
  const auto kappa = upper_values.size();
  if (kappa == 0) throw CurveError("utility curve needs at least one segment");
  if (lower_values.size() != kappa || breakpoints.size() != kappa + 1)
    throw CurveError("utility curve needs kappa+1 breakpoints, kappa upper and kappa lower values");
  for (double v : breakpoints)
    if (!std::isfinite(v)) throw CurveError("utility breakpoints must be finite");
  for (std::size_t i = 0; i < kappa; ++i)
    if (!std::isfinite(upper_values[i]) || !std::isfinite(lower_values[i]))
      throw CurveError(segment_message(static_cast<int>(i) + 1, "non-finite endpoint value"));
  if (breakpoints.front() != 0.0) throw CurveError("first breakpoint must be 0");
  if (std::abs(upper_values.front()) > kUtilityTolerance) throw CurveError("curve must start at 0");
  upper_values.front() = 0.0;

  for (std::size_t k = 1; k <= kappa; ++k) {
    if (!(breakpoints[k] > breakpoints[k - 1]))
      throw CurveError(segment_message(static_cast<int>(k), "breakpoints must be strictly increasing"));
    if (lower_values[k - 1] < upper_values[k - 1] - kUtilityTolerance)
      throw CurveError(segment_message(static_cast<int>(k), "decreasing within the segment"));
    if (k < kappa && upper_values[k] < lower_values[k - 1] - kUtilityTolerance)
      throw CurveError(segment_message(static_cast<int>(k + 1), "downward jump at its left breakpoint"));
  }

  UtilityCurve c;
  c.breakpoints_ = std::move(breakpoints);
  c.upper_ = std::move(upper_values);
  c.lower_ = std::move(lower_values);
  return c;
}

UtilityCurve UtilityCurve::from_slopes(std::span<const double> slopes, std::span<const double> intercepts,
                                       std::span<const double> breakpoints) {
  if (slopes.size() != intercepts.size() || breakpoints.size() != slopes.size() + 1)
    throw CurveError("slope form needs kappa slopes, kappa intercepts and kappa+1 breakpoints");
  std::vector<double> upper(slopes.size());
  std::vector<double> lower(slopes.size());
  for (std::size_t k = 0; k < slopes.size(); ++k) {
    upper[k] = slopes[k] * breakpoints[k] + intercepts[k];
    lower[k] = slopes[k] * breakpoints[k + 1] + intercepts[k];
  }
  return from_values({breakpoints.begin(), breakpoints.end()}, std::move(upper), std::move(lower));
}

double UtilityCurve::slope(int k) const {
  return (lower(k) - upper(k - 1)) / (breakpoint(k) - breakpoint(k - 1));
}

double UtilityCurve::intercept(int k) const { return upper(k - 1) - slope(k) * breakpoint(k - 1); }

int UtilityCurve::segment_of(double phi) const {
  if (phi < 0.0 || phi > domain_end() || std::isnan(phi)) {
    std::ostringstream s;
    s << "energy not served " << phi << " outside [0, " << domain_end() << "]";
    throw DomainError(s.str());
  }
  if (phi == 0.0) return 0;
  const auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), phi);
  return static_cast<int>(it - breakpoints_.begin());
}

double UtilityCurve::evaluate(double phi) const {
  const int k = segment_of(phi);
  if (k == 0) return 0.0;
  const double left = breakpoints_[k - 1];
  const double right = breakpoints_[k];
  if (phi == right) return lower_[k - 1];
  const double t = (phi - left) / (right - left);
  return upper_[k - 1] + (lower_[k - 1] - upper_[k - 1]) * t;
}

bool check_cap(const UtilityCurve& curve, double min_price, double acceptable_energy) {
  return curve.max_value() <= min_price * acceptable_energy + kUtilityTolerance;
}

}  // namespace evflex
