#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "evflex/model/instance.hpp"
#include "evflex/model/time_grid.hpp"

namespace evflex::testing {

/// Random capped curve with `kappa` segments on [0, e].
inline UtilityCurve random_capped_curve(std::mt19937_64& rng, int kappa, double e, double cap) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> inner;
  for (int k = 1; k < kappa; ++k) inner.push_back(e * (0.05 + 0.9 * u(rng)));
  std::sort(inner.begin(), inner.end());
  for (std::size_t i = 1; i < inner.size(); ++i) inner[i] = std::max(inner[i], inner[i - 1] + 1e-3 * e);
  std::vector<double> a{0.0};
  a.insert(a.end(), inner.begin(), inner.end());
  a.push_back(e);
  std::vector<double> vals(2 * kappa);
  for (auto& v : vals) v = cap * u(rng);
  std::sort(vals.begin(), vals.end());
  vals[0] = 0.0;
  std::vector<double> ub, ul;
  for (int k = 0; k < kappa; ++k) {
    ub.push_back(vals[2 * k]);
    ul.push_back(vals[2 * k + 1]);
  }
  return UtilityCurve::from_values(a, ub, ul);
}

struct RandomInstanceShape {
  int max_sessions = 4;
  int max_slots = 6;
  int max_kappa = 2;
  /// Scale of the energy cap relative to the full-service grid energy; drawn
  /// uniformly from [low, high].
  double energy_low = 0.2;
  double energy_high = 1.3;
  double power_low = 5.0;
  double power_high = 60.0;
};

inline Instance random_instance(std::mt19937_64& rng, const RandomInstanceShape& shape = {}) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance inst;
  inst.grid.delta_t_hours = u(rng) < 0.5 ? 0.5 : 1.0;
  inst.grid.num_slots = pick(1, shape.max_slots);
  inst.grid.start = parse_timestamp("2021-06-01T00:00");
  const int n = pick(1, shape.max_sessions);
  double full = 0.0;
  for (int i = 0; i < n; ++i) {
    SessionSpec s;
    s.id = "s" + std::to_string(i);
    s.arrival_slot = pick(0, inst.grid.num_slots - 1);
    s.departure_slot = pick(s.arrival_slot, inst.grid.num_slots - 1);
    s.required_energy_kwh = 2.0 + 28.0 * u(rng);
    s.gamma = 0.3 + 0.7 * u(rng);
    s.max_power_kw = 3.0 + 19.0 * u(rng);
    s.efficiency = 0.85 + 0.15 * u(rng);
    if (u(rng) < 0.7) {
      s.price_eur_per_kwh = {s.gamma < 0.99 ? 0.30 : 0.35};
    } else {
      s.price_eur_per_kwh.resize(inst.grid.num_slots);
      for (auto& p : s.price_eur_per_kwh) p = 0.2 + 0.2 * u(rng);
    }
    const double cap = *std::min_element(s.price_eur_per_kwh.begin(), s.price_eur_per_kwh.end()) * s.gamma *
                       s.required_energy_kwh;
    s.utility = random_capped_curve(rng, pick(1, shape.max_kappa), s.required_energy_kwh, cap);
    full += s.required_energy_kwh / s.efficiency;
    inst.sessions.push_back(std::move(s));
  }
  inst.power_cap_kw = shape.power_low + (shape.power_high - shape.power_low) * u(rng);
  inst.energy_cap_kwh = full * (shape.energy_low + (shape.energy_high - shape.energy_low) * u(rng));
  return inst;
}

}  // namespace evflex::testing
