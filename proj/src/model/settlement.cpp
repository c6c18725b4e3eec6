#include "evflex/model/settlement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace evflex {

namespace {

std::string fmt_double(double v) {
  std::ostringstream s;
  s.precision(9);
  s << std::fixed << v;
  return s.str();
}

[[noreturn]] void inconsistent(const SessionSpec& s, const std::string& what) {
  throw SettlementError("session " + s.id + ": " + what);
}

}  // namespace

SettlementReport settle(const Instance& instance, const Schedule& schedule, std::span<const double> phi,
                        std::span<const double> z) {
  const auto n_sessions = instance.sessions.size();
  if (schedule.sessions() != static_cast<int>(n_sessions) || schedule.slots() != instance.grid.num_slots)
    throw SettlementError("schedule shape does not match the instance");
  if (phi.size() != n_sessions || z.size() != n_sessions)
    throw SettlementError("phi and z need one value per session");

  const double dt = instance.grid.delta_t_hours;
  const double tol = kSettlementTolerance;
  SettlementReport report;
  report.sessions.reserve(n_sessions);
  auto& agg = report.aggregate;
  agg.min_not_served_kwh = n_sessions ? std::numeric_limits<double>::infinity() : 0.0;

  for (std::size_t n = 0; n < n_sessions; ++n) {
    const auto& s = instance.sessions[n];
    double gross = 0.0;
    double h = 0.0;
    for (int t = 0; t < instance.grid.num_slots; ++t) {
      const double x = schedule.at(static_cast<int>(n), t);
      if (x == 0.0) continue;
      h += x;
      gross += s.price_at(t) * x;
    }
    h *= dt;
    gross *= dt;

    const double expected_phi = std::max(0.0, s.required_energy_kwh - s.efficiency * h);
    if (std::abs(phi[n] - expected_phi) > tol)
      inconsistent(s, "phi " + fmt_double(phi[n]) + " kWh but schedule implies " + fmt_double(expected_phi));

    // Z may sit anywhere in the lower-semicontinuous bracket around phi.
    const double e = s.utility.domain_end();
    const double z_lo = s.utility.evaluate(std::clamp(phi[n] - tol, 0.0, e)) - tol;
    const double z_hi = s.utility.evaluate(std::clamp(phi[n] + tol, 0.0, e)) + tol;
    if (z[n] < z_lo || z[n] > z_hi)
      inconsistent(s, "compensation " + fmt_double(z[n]) + " EUR does not match the utility at phi " +
                          fmt_double(phi[n]));

    SessionSettlement row;
    row.id = s.id;
    row.grid_energy_kwh = h;
    row.battery_energy_kwh = s.efficiency * h;
    row.not_served_kwh = phi[n];
    row.compensation = Money::from_euros(z[n]);
    row.gross = Money::from_euros(gross);
    row.net = row.gross - row.compensation;

    agg.served_cost += row.gross;
    agg.total_compensation += row.compensation;
    agg.total_net += row.net;
    agg.min_net = n == 0 ? row.net : std::min(agg.min_net, row.net);
    agg.total_not_served_kwh += row.not_served_kwh;
    agg.min_not_served_kwh = std::min(agg.min_not_served_kwh, row.not_served_kwh);
    agg.total_grid_energy_kwh += h;
    report.sessions.push_back(std::move(row));
  }
  agg.average_cent_per_kwh = agg.total_grid_energy_kwh > 0.0
                                 ? 100.0 * agg.total_net.euros() / agg.total_grid_energy_kwh
                                 : std::numeric_limits<double>::quiet_NaN();
  return report;
}

void write_settlement_csv(const SettlementReport& report, std::ostream& out) {
  out << "id,H_kwh,phi_kwh,Z_eur,gross_eur,pi_eur\n";
  for (const auto& r : report.sessions) {
    out << r.id << ',' << fmt_double(r.grid_energy_kwh) << ',' << fmt_double(r.not_served_kwh) << ','
        << r.compensation.to_string() << ',' << r.gross.to_string() << ',' << r.net.to_string() << '\n';
  }
}

void write_aggregate_csv(const SettlementAggregate& a, std::ostream& out) {
  out << "served_cost_eur,U_eur,P_eur,rho_eur,phi_min_kwh,Phi_kwh,H_kwh,avg_cent_per_kwh\n";
  out << a.served_cost.to_string() << ',' << a.total_compensation.to_string() << ',' << a.total_net.to_string() << ','
      << a.min_net.to_string() << ',' << fmt_double(a.min_not_served_kwh) << ',' << fmt_double(a.total_not_served_kwh)
      << ',' << fmt_double(a.total_grid_energy_kwh) << ',' << fmt_double(a.average_cent_per_kwh) << '\n';
}

}  // namespace evflex
