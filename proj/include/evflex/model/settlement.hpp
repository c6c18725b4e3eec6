#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evflex/model/instance.hpp"
#include "evflex/model/money.hpp"

namespace evflex {

/// Reported shortfall or compensation disagrees with the schedule.
class SettlementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SessionSettlement {
  std::string id;
  double grid_energy_kwh = 0.0;     // H
  double battery_energy_kwh = 0.0;  // eta * H
  double not_served_kwh = 0.0;      // phi
  Money compensation;               // Z
  Money gross;                      // delta_t * sum_t c * x
  Money net;                        // gross - Z, exact
};

struct SettlementAggregate {
  Money served_cost;         // sum of gross charges
  Money total_compensation;  // U
  Money total_net;           // P
  Money min_net;             // rho; zero when there are no sessions
  double total_not_served_kwh = 0.0;
  double min_not_served_kwh = 0.0;
  double total_grid_energy_kwh = 0.0;
  /// 100 * P / sum H, cents per grid-side kWh. NaN when nothing was drawn.
  double average_cent_per_kwh = 0.0;
};

struct SettlementReport {
  std::vector<SessionSettlement> sessions;
  SettlementAggregate aggregate;
};

inline constexpr double kSettlementTolerance = 1e-6;

/// Settles a schedule. phi and z are checked against the schedule, not
/// trusted: phi must equal max(0, E - eta*H) and z must be the curve value
/// at phi, both within kSettlementTolerance.
SettlementReport settle(const Instance& instance, const Schedule& schedule, std::span<const double> phi,
                        std::span<const double> z);

/// id,H_kwh,phi_kwh,Z_eur,gross_eur,pi_eur
void write_settlement_csv(const SettlementReport& report, std::ostream& out);
/// One header line plus one row.
void write_aggregate_csv(const SettlementAggregate& aggregate, std::ostream& out);

}  // namespace evflex
