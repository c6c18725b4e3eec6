#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace evflex {

/// Raised when a curve cannot be built because its endpoint values break
/// monotonicity or its breakpoints are malformed. The message names the
/// offending segment.
class CurveError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a curve is evaluated outside [0, E].
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Tolerance (EUR) for monotonicity and cap checks.
inline constexpr double kUtilityTolerance = 1e-9;

/// Lower-semicontinuous, non-decreasing, piecewise-linear map from energy not
/// served (kWh) to compensation (EUR).
///
/// Stored by endpoint values. Segment k (1..kappa) runs over
/// (breakpoint[k-1], breakpoint[k]] and goes linearly from upper(k-1) at its
/// left end to lower(k) at its right end. Jumps at a breakpoint only go up,
/// and the curve takes the lower value there. value(0) = 0.
class UtilityCurve {
 public:
  /// Empty curve with no segments; rejected by instance validation.
  UtilityCurve() = default;

  /// breakpoints: alpha_0..alpha_kappa; upper_values: u_bar_0..u_bar_{kappa-1};
  /// lower_values: u_low_1..u_low_kappa.
  static UtilityCurve from_values(std::vector<double> breakpoints, std::vector<double> upper_values,
                                  std::vector<double> lower_values);

  /// Builds from per-segment slope and intercept, f_k(phi) = h_k phi + b_k.
  static UtilityCurve from_slopes(std::span<const double> slopes, std::span<const double> intercepts,
                                  std::span<const double> breakpoints);

  [[nodiscard]] int segments() const { return static_cast<int>(upper_.size()); }
  [[nodiscard]] bool empty() const { return upper_.empty(); }

  [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
  [[nodiscard]] const std::vector<double>& upper_values() const { return upper_; }
  [[nodiscard]] const std::vector<double>& lower_values() const { return lower_; }

  [[nodiscard]] double breakpoint(int k) const { return breakpoints_.at(k); }
  /// u_bar_k, the value of segment k+1 at its left end (k < kappa).
  [[nodiscard]] double upper(int k) const { return upper_.at(k); }
  /// u_low_k, the value of segment k at its right end; lower(0) == 0.
  [[nodiscard]] double lower(int k) const { return k == 0 ? 0.0 : lower_.at(k - 1); }
  [[nodiscard]] double slope(int k) const;
  [[nodiscard]] double intercept(int k) const;

  [[nodiscard]] double domain_end() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
  /// u_low_kappa, attained at phi = E.
  [[nodiscard]] double max_value() const { return lower_.empty() ? 0.0 : lower_.back(); }

  /// Compensation owed for `phi` kWh not served. Throws DomainError outside
  /// [0, domain_end()].
  [[nodiscard]] double evaluate(double phi) const;

  /// 0 for phi == 0, otherwise the k with phi in (alpha_{k-1}, alpha_k].
  [[nodiscard]] int segment_of(double phi) const;

  bool operator==(const UtilityCurve&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> upper_;
  std::vector<double> lower_;
};

/// True iff the curve's maximum stays within min_price * acceptable_energy
/// (plus kUtilityTolerance), which makes the payment revenue adequate once
/// the acceptable energy is served.
[[nodiscard]] bool check_cap(const UtilityCurve& curve, double min_price, double acceptable_energy);

}  // namespace evflex
