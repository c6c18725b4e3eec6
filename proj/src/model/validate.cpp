#include "evflex/model/validate.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

namespace evflex {

std::string ValidationReport::summary() const {
  std::ostringstream s;
  for (const auto& v : violations) s << v.field << ": " << v.message << '\n';
  return s.str();
}

namespace {

std::string session_field(std::size_t n, const char* name) {
  return "sessions[" + std::to_string(n) + "]." + name;
}

void check_session(const SessionSpec& s, std::size_t n, const TimeGrid& grid, std::vector<Violation>& out) {
  auto add = [&](const char* field, std::string message) { out.push_back({session_field(n, field), std::move(message)}); };

  if (s.id.empty()) add("id", "id must not be empty");
  if (s.arrival_slot < 0 || s.arrival_slot >= grid.num_slots) add("arrival_slot", "arrival slot outside the grid");
  if (s.departure_slot < 0 || s.departure_slot >= grid.num_slots)
    add("departure_slot", "departure slot outside the grid");
  if (s.departure_slot < s.arrival_slot) add("departure_slot", "departure slot before arrival slot");
  if (!(s.required_energy_kwh > 0.0) || !std::isfinite(s.required_energy_kwh))
    add("required_energy_kwh", "required energy must be positive");
  if (!(s.gamma >= 0.0 && s.gamma <= 1.0)) add("gamma", "gamma out of [0,1]");
  if (!(s.max_power_kw > 0.0) || !std::isfinite(s.max_power_kw)) add("max_power_kw", "max power must be positive");
  if (!(s.efficiency > 0.0 && s.efficiency <= 1.0)) add("efficiency", "efficiency out of (0,1]");

  bool prices_ok = true;
  if (s.price_eur_per_kwh.size() != 1 && s.price_eur_per_kwh.size() != static_cast<std::size_t>(grid.num_slots)) {
    add("price_eur_per_kwh", "price series must be a scalar or have one value per slot");
    prices_ok = false;
  }
  for (double p : s.price_eur_per_kwh) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      add("price_eur_per_kwh", "prices must be finite and non-negative");
      prices_ok = false;
      break;
    }
  }

  const auto& u = s.utility;
  if (u.empty()) {
    add("utility", "utility curve has no segments");
    return;
  }
  const double e = s.required_energy_kwh;
  if (std::abs(u.domain_end() - e) > 1e-9 * std::max(1.0, e))
    add("utility", "last breakpoint must equal the required energy");
  if (prices_ok && s.gamma >= 0.0 && s.gamma <= 1.0 && !check_cap(u, min_price(s), acceptable_energy(s)))
    add("utility", "utility cap exceeds revenue-adequacy bound");
}

}  // namespace

ValidationReport validate(const Instance& instance) {
  ValidationReport report;
  auto& out = report.violations;
  const auto& grid = instance.grid;
  if (!(grid.delta_t_hours > 0.0) || !std::isfinite(grid.delta_t_hours))
    out.push_back({"grid.delta_t_hours", "slot length must be positive"});
  if (grid.num_slots < 1) out.push_back({"grid.num_slots", "grid needs at least one slot"});
  if (!(instance.power_cap_kw > 0.0) || !std::isfinite(instance.power_cap_kw)) out.push_back({"power_cap_kw", "power cap must be positive"});
  if (!(instance.energy_cap_kwh >= 0.0) || !std::isfinite(instance.energy_cap_kwh))
    out.push_back({"energy_cap_kwh", "energy cap must be non-negative"});
  if (!out.empty()) return report;

  std::unordered_set<std::string> ids;
  for (std::size_t n = 0; n < instance.sessions.size(); ++n) {
    const auto& s = instance.sessions[n];
    if (!s.id.empty() && !ids.insert(s.id).second) out.push_back({session_field(n, "id"), "duplicate session id"});
    check_session(s, n, grid, out);
  }
  return report;
}

}  // namespace evflex
