#include "evflex/solver/result.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace evflex {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::GapReached: return "gap-reached";
    case SolveStatus::Limit: return "limit";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Heuristic: return "heuristic";
  }
  return "unknown";
}

namespace {

constexpr double kSnap = 1e-9;

double snap_to_breakpoint(const UtilityCurve& u, double phi) {
  for (double a : u.breakpoints())
    if (std::abs(phi - a) <= kSnap) return a;
  return std::clamp(phi, 0.0, u.domain_end());
}

}  // namespace

void canonicalize(const Instance& instance, SolveResult& r) {
  const auto n_sessions = instance.sessions.size();
  const double dt = instance.grid.delta_t_hours;
  r.served.assign(n_sessions, 0.0);
  r.phi.assign(n_sessions, 0.0);
  r.z.assign(n_sessions, 0.0);
  r.segment.assign(n_sessions, 0);
  double revenue = 0.0;
  double compensation = 0.0;
  for (std::size_t n = 0; n < n_sessions; ++n) {
    const auto& s = instance.sessions[n];
    const int i = static_cast<int>(n);
    double charge = 0.0;
    for (int t = s.arrival_slot; t <= s.departure_slot; ++t) charge += s.price_at(t) * r.schedule.at(i, t);
    revenue += dt * charge;
    r.served[n] = r.schedule.grid_energy(i, dt);
    const double phi = snap_to_breakpoint(s.utility, std::max(0.0, s.required_energy_kwh - s.efficiency * r.served[n]));
    r.phi[n] = phi;
    r.z[n] = s.utility.evaluate(phi);
    r.segment[n] = s.utility.segment_of(phi);
    compensation += r.z[n];
  }
  r.objective = revenue - compensation;
  r.has_solution = true;
}

SolveResult greedy_incumbent(const Instance& instance) {
  const auto& grid = instance.grid;
  const double dt = grid.delta_t_hours;
  const int n_sessions = static_cast<int>(instance.sessions.size());

  std::vector<int> order(n_sessions);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> c_min(n_sessions);
  for (int n = 0; n < n_sessions; ++n) c_min[n] = min_price(instance.sessions[n]);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return c_min[a] > c_min[b]; });

  SolveResult r;
  r.schedule = Schedule(n_sessions, grid.num_slots);
  std::vector<double> used(grid.num_slots, 0.0);
  double energy_left = instance.energy_cap_kwh;
  for (int n : order) {
    const auto& s = instance.sessions[n];
    double need = full_service_grid_energy(s);
    for (int t = s.arrival_slot; t <= s.departure_slot && need > 0.0 && energy_left > 0.0; ++t) {
      double power = std::min({s.max_power_kw, instance.power_cap_kw - used[t], need / dt, energy_left / dt});
      if (power <= 0.0) continue;
      r.schedule.at(n, t) = power;
      used[t] += power;
      need -= power * dt;
      energy_left -= power * dt;
    }
  }
  canonicalize(instance, r);
  r.status = SolveStatus::Heuristic;
  r.best_bound = r.objective;
  return r;
}

ResidualReport verify_solution(const Instance& instance, const SolveResult& r, double tolerance) {
  ResidualReport rep;
  rep.tolerance = tolerance;
  auto check = [&](const std::string& row, double violation, double scale = 1.0) {
    ++rep.checks;
    const double v = std::max(0.0, violation) / std::max(1.0, std::abs(scale));
    if (v > rep.worst.value) rep.worst = {row, v};
    if (v > tolerance || std::isnan(violation)) rep.violations.push_back({row, v});
  };

  const auto& grid = instance.grid;
  const double dt = grid.delta_t_hours;
  const int n_sessions = static_cast<int>(instance.sessions.size());
  if (!r.has_solution || r.schedule.sessions() != n_sessions || r.schedule.slots() != grid.num_slots ||
      static_cast<int>(r.phi.size()) != n_sessions || static_cast<int>(r.z.size()) != n_sessions ||
      static_cast<int>(r.segment.size()) != n_sessions) {
    rep.violations.push_back({"shape", 1.0});
    rep.worst = {"shape", 1.0};
    return rep;
  }

  double revenue = 0.0;
  double compensation = 0.0;
  std::vector<double> slot(grid.num_slots, 0.0);
  for (int n = 0; n < n_sessions; ++n) {
    const auto& s = instance.sessions[n];
    const std::string id = s.id;
    double h = 0.0;
    for (int t = 0; t < grid.num_slots; ++t) {
      const double x = r.schedule.at(n, t);
      const std::string cell = "[" + id + "," + std::to_string(t) + "]";
      if (!s.available(t)) {
        check("window" + cell, std::abs(x));
        continue;
      }
      check("nonnegative" + cell, -x);
      check("pole_limit" + cell, x - s.max_power_kw, s.max_power_kw);
      h += x;
      slot[t] += x;
      revenue += dt * s.price_at(t) * x;
    }
    h *= dt;
    const double phi = r.phi[n];
    const double z = r.z[n];
    compensation += z;
    check("served_energy_bound[" + id + "]", h - full_service_grid_energy(s), full_service_grid_energy(s));
    check("shortfall[" + id + "]", s.required_energy_kwh - phi - s.efficiency * h, s.required_energy_kwh);
    check("phi_bounds[" + id + "]", std::max(-phi, phi - s.required_energy_kwh), s.required_energy_kwh);

    // Z must be reachable by the encoding with an integral segment choice:
    // inside the segment that holds phi, and on the curve there.
    const auto& u = s.utility;
    const double e = u.domain_end();
    const int k = r.segment[n];
    double enc = 0.0;
    if (k < 0 || k > u.segments()) {
      enc = 1.0;
    } else if (k == 0) {
      enc = std::max(std::abs(phi), std::abs(z));
    } else {
      enc = std::max({u.breakpoint(k - 1) - phi, phi - u.breakpoint(k), 0.0});
    }
    const double lo = u.evaluate(std::clamp(phi - tolerance, 0.0, e)) - tolerance;
    const double hi = u.evaluate(std::clamp(phi + tolerance, 0.0, e)) + tolerance;
    enc = std::max({enc, lo - z, z - hi});
    check("utility_encoding[" + id + "]", enc, std::max(1.0, u.max_value()));
  }
  double total = 0.0;
  for (int t = 0; t < grid.num_slots; ++t) {
    check("slot_power[" + std::to_string(t) + "]", slot[t] - instance.power_cap_kw, instance.power_cap_kw);
    total += slot[t];
  }
  check("energy_cap", dt * total - instance.energy_cap_kwh, instance.energy_cap_kwh);
  check("objective", std::abs(r.objective - (revenue - compensation)), std::max(1.0, std::abs(r.objective)));
  return rep;
}

void write_schedule_csv(const Instance& instance, const SolveResult& r, std::ostream& out) {
  out << "id";
  for (int t = 0; t < instance.grid.num_slots; ++t) out << ",t" << t;
  out << '\n';
  char buf[32];
  for (std::size_t n = 0; n < instance.sessions.size(); ++n) {
    out << instance.sessions[n].id;
    for (int t = 0; t < instance.grid.num_slots; ++t) {
      std::snprintf(buf, sizeof buf, "%.6f", r.schedule.at(static_cast<int>(n), t));
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_sessions_csv(const Instance& instance, const SolveResult& r, std::ostream& out) {
  out << "id,phi_kwh,Z_eur,segment\n";
  char buf[96];
  for (std::size_t n = 0; n < instance.sessions.size(); ++n) {
    std::snprintf(buf, sizeof buf, ",%.9f,%.9f,%d\n", r.phi[n], r.z[n], r.segment[n]);
    out << instance.sessions[n].id << buf;
  }
}

nlohmann::json run_metadata(const SolveResult& r) {
  return {{"status", to_string(r.status)},  {"objective_eur", r.objective}, {"best_bound_eur", r.best_bound},
          {"gap_eur", r.gap},               {"nodes", r.nodes},             {"lp_iterations", r.lp_iterations},
          {"wall_seconds", r.wall_seconds}, {"has_solution", r.has_solution}};
}

}  // namespace evflex
