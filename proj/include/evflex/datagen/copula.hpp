#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evflex/model/time_grid.hpp"

namespace evflex::datagen {

/// One historical charging session.
struct SessionRecord {
  Timestamp arrival;
  Timestamp departure;
  double energy_kwh = 0.0;

  bool operator==(const SessionRecord&) const = default;
};

/// CSV with header arrival_iso8601,departure_iso8601,energy_kwh. Throws
/// std::runtime_error naming the line on malformed input.
std::vector<SessionRecord> read_records_csv(std::istream& in);
void write_records_csv(const std::vector<SessionRecord>& records, std::ostream& out);

/// Empirical distribution with linear interpolation between order
/// statistics: inverse(u) reads the sorted sample at position u*(n-1).
class EcdfMarginal {
 public:
  EcdfMarginal() = default;
  /// Needs at least two distinct values.
  explicit EcdfMarginal(std::vector<double> sample);

  [[nodiscard]] double inverse(double u) const;
  /// The distribution function that inverse() samples from.
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double min() const { return sorted_.front(); }
  [[nodiscard]] double max() const { return sorted_.back(); }
  [[nodiscard]] const std::vector<double>& values() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

inline constexpr int kCopulaDim = 3;
inline constexpr std::array<const char*, kCopulaDim> kCopulaColumns{"arrival", "duration", "energy"};

/// Multivariate t copula over (arrival hour of day, duration hours, energy kWh).
struct CopulaModel {
  Eigen::Matrix3d correlation = Eigen::Matrix3d::Identity();
  int nu = 4;
  std::array<EcdfMarginal, kCopulaDim> marginals;
  /// Kendall tau estimates the correlation was derived from.
  Eigen::Matrix3d kendall_tau = Eigen::Matrix3d::Identity();
  /// Whether the sin-transformed tau matrix had to be repaired.
  bool projected = false;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMinFitRecords = 50;
inline constexpr int kNuMin = 3;
inline constexpr int kNuMax = 30;

CopulaModel fit_copula(const std::vector<SessionRecord>& records);

/// Nearest unit-diagonal positive-definite matrix by eigenvalue clipping.
/// Returns whether anything changed.
bool project_to_correlation(Eigen::Matrix3d& r, double min_eigenvalue = 1e-6);

/// One synthetic draw; departure_hour = arrival_hour + duration.
struct CopulaDraw {
  double arrival_hour = 0.0;
  double departure_hour = 0.0;
  double energy_kwh = 0.0;
};

/// Draw number `index` of the sequence identified by `seed`.
CopulaDraw sample_copula_at(const CopulaModel& model, std::uint64_t seed, std::uint64_t index);
std::vector<CopulaDraw> sample_copula(const CopulaModel& model, int count, std::uint64_t seed);

/// Kendall's tau-b, O(n^2).
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);
/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Hours after midnight of the timestamp's own day.
double hour_of_day(Timestamp t);

}  // namespace evflex::datagen
