#include "evflex/solver/milp.hpp"

#include <algorithm>

#include "evflex/model/validate.hpp"

namespace evflex {

std::optional<int> MilpModel::find(const std::string& name) const {
  auto it = registry.find(name);
  if (it == registry.end()) return std::nullopt;
  return it->second;
}

int MilpModel::power_column(int n, int t) const {
  const auto& s = instance.sessions.at(n);
  if (!s.available(t)) return -1;
  return sessions[n].power[t - s.arrival_slot];
}

namespace {

std::string name1(const char* base, const std::string& id) { return std::string(base) + "[" + id + "]"; }

}  // namespace

MilpModel build_model(const Instance& instance) {
  if (auto report = validate(instance); !report.ok()) throw ValidationError(std::move(report));

  MilpModel m;
  m.instance = instance;
  auto& lp = m.program;
  const double dt = instance.grid.delta_t_hours;
  const int slots = instance.grid.num_slots;
  std::vector<std::vector<lp::Term>> slot_terms(slots);

  auto add_col = [&](std::string name, double lo, double hi, double obj) {
    const int j = lp.add_column(name, lo, hi, obj);
    m.registry.emplace(std::move(name), j);
    return j;
  };

  m.sessions.resize(instance.sessions.size());
  for (std::size_t n = 0; n < instance.sessions.size(); ++n) {
    const auto& s = instance.sessions[n];
    auto& cols = m.sessions[n];
    std::vector<lp::Term> served_terms;
    for (int t = s.arrival_slot; t <= s.departure_slot; ++t) {
      const int j = add_col("x[" + s.id + "," + std::to_string(t) + "]", 0.0, s.max_power_kw, dt * s.price_at(t));
      cols.power.push_back(j);
      served_terms.push_back({j, -dt});
      slot_terms[t].push_back({j, -1.0});
    }
    const double deliverable = s.max_power_kw * dt * s.window_length();
    cols.served = add_col(name1("H", s.id), 0.0, std::min(deliverable, full_service_grid_energy(s)), 0.0);
    cols.not_served = add_col(name1("phi", s.id), 0.0, s.required_energy_kwh, 0.0);
    cols.compensation = add_col(name1("Z", s.id), 0.0, s.utility.max_value(), -1.0);

    served_terms.insert(served_terms.begin(), {cols.served, 1.0});
    cols.served_row = lp.add_row(name1("served_energy", s.id), std::move(served_terms), 0.0, 0.0);
    cols.shortfall_row = lp.add_row(name1("shortfall", s.id), {{cols.not_served, 1.0}, {cols.served, s.efficiency}},
                                    s.required_energy_kwh, lp::kInfinity);

    const int first_new = lp.num_columns();
    cols.utility = encode(s.utility).install(lp, cols.not_served, cols.compensation, s.id);
    for (int j = first_new; j < lp.num_columns(); ++j) m.registry.emplace(lp.column(j).name, j);
    for (int k = 1; k <= static_cast<int>(cols.utility.segment.size()); ++k) {
      m.binaries.push_back(cols.utility.segment[k - 1]);
      m.binary_owner.emplace_back(static_cast<int>(n), k);
    }
  }

  std::vector<lp::Term> energy_terms;
  for (int t = 0; t < slots; ++t) {
    const int p = add_col("p[" + std::to_string(t) + "]", 0.0, instance.power_cap_kw, 0.0);
    m.slot_power.push_back(p);
    slot_terms[t].insert(slot_terms[t].begin(), {p, 1.0});
    m.slot_rows.push_back(lp.add_row("slot_power[" + std::to_string(t) + "]", std::move(slot_terms[t]), 0.0, 0.0));
    energy_terms.push_back({p, dt});
  }
  m.energy_row = lp.add_row("energy_cap", std::move(energy_terms), -lp::kInfinity, instance.energy_cap_kwh);
  return m;
}

}  // namespace evflex
