#pragma once

#include <string>
#include <vector>

#include "evflex/model/time_grid.hpp"
#include "evflex/utility/utility_curve.hpp"

namespace evflex {

/// One charging session as declared to the operator. Energies are
/// battery-side; the grid draws required_energy / efficiency for full service.
struct SessionSpec {
  std::string id;
  int arrival_slot = 0;
  int departure_slot = 0;
  double required_energy_kwh = 0.0;
  /// Fraction of the required energy the user accepts as a minimum.
  double gamma = 1.0;
  double max_power_kw = 22.0;
  double efficiency = 1.0;
  /// Either a single constant tariff or one value per grid slot.
  std::vector<double> price_eur_per_kwh{0.0};
  UtilityCurve utility;

  [[nodiscard]] double price_at(int slot) const {
    return price_eur_per_kwh.size() == 1 ? price_eur_per_kwh.front() : price_eur_per_kwh.at(slot);
  }
  [[nodiscard]] int window_length() const { return departure_slot - arrival_slot + 1; }
  [[nodiscard]] bool available(int slot) const { return slot >= arrival_slot && slot <= departure_slot; }

  bool operator==(const SessionSpec&) const = default;
};

struct Instance {
  TimeGrid grid;
  std::vector<SessionSpec> sessions;
  double power_cap_kw = 0.0;
  double energy_cap_kwh = 0.0;

  bool operator==(const Instance&) const = default;
};

/// gamma * E, the least energy the user agreed to accept.
[[nodiscard]] double acceptable_energy(const SessionSpec& session);

/// Lowest tariff over the session's whole price series. Throws
/// std::invalid_argument for an empty series.
[[nodiscard]] double min_price(const SessionSpec& session);

/// Grid-side energy that fully serves the session.
[[nodiscard]] inline double full_service_grid_energy(const SessionSpec& s) {
  return s.required_energy_kwh / s.efficiency;
}

/// Dense session x slot power matrix in kW.
class Schedule {
 public:
  Schedule() = default;
  Schedule(int sessions, int slots) : sessions_(sessions), slots_(slots), power_(static_cast<std::size_t>(sessions) * slots) {}

  [[nodiscard]] int sessions() const { return sessions_; }
  [[nodiscard]] int slots() const { return slots_; }
  [[nodiscard]] double at(int n, int t) const { return power_.at(index(n, t)); }
  double& at(int n, int t) { return power_.at(index(n, t)); }

  /// Energy drawn from the grid by session n, delta_t * sum_t x[n][t].
  [[nodiscard]] double grid_energy(int n, double delta_t_hours) const;
  [[nodiscard]] double slot_power(int t) const;

  bool operator==(const Schedule&) const = default;

 private:
  [[nodiscard]] std::size_t index(int n, int t) const { return static_cast<std::size_t>(n) * slots_ + t; }
  int sessions_ = 0;
  int slots_ = 0;
  std::vector<double> power_;
};

}  // namespace evflex
