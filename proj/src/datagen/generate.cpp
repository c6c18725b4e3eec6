#include "evflex/datagen/generate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace evflex::datagen {

void check_policy(const GenPolicy& p) {
  auto fail = [](const char* field, const char* what) { throw std::invalid_argument(std::string(field) + ": " + what); };
  if (p.count < 1) fail("count", "must be positive");
  if (!(p.gamma_low >= 0.0 && p.gamma_low <= p.gamma_high && p.gamma_high <= 1.0))
    fail("gamma", "need 0 <= low <= high <= 1");
  if (!(p.participating_rate >= 0.0)) fail("participating_rate", "must be non-negative");
  if (!(p.non_participating_rate >= 0.0)) fail("non_participating_rate", "must be non-negative");
  if (p.kappa < 1) fail("kappa", "must be at least 1");
  if (!(p.max_power_kw > 0.0)) fail("max_power_kw", "must be positive");
  if (!(p.efficiency > 0.0 && p.efficiency <= 1.0)) fail("efficiency", "must lie in (0, 1]");
  if (!(p.power_cap_kw > 0.0)) fail("power_cap_kw", "must be positive");
  if (!(p.energy_cap_kwh >= 0.0)) fail("energy_cap_kwh", "must be non-negative");
  if (!(p.grid.delta_t_hours > 0.0) || p.grid.num_slots < 1) fail("grid", "needs a positive slot length and count");
}

GenPolicy policy_from_json(const nlohmann::json& doc) {
  GenPolicy p;
  if (!doc.is_object()) throw std::invalid_argument("policy must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "count") {
        p.count = value.get<int>();
      } else if (key == "gamma") {
        p.gamma_low = value.value("low", p.gamma_low);
        p.gamma_high = value.value("high", p.gamma_high);
      } else if (key == "tariff") {
        p.participating_rate = value.value("participating_rate", p.participating_rate);
        p.non_participating_rate = value.value("non_participating_rate", p.non_participating_rate);
        p.participation_threshold = value.value("threshold", p.participation_threshold);
      } else if (key == "kappa") {
        p.kappa = value.get<int>();
      } else if (key == "max_power_kw") {
        p.max_power_kw = value.get<double>();
      } else if (key == "efficiency") {
        p.efficiency = value.get<double>();
      } else if (key == "power_cap_kw") {
        p.power_cap_kw = value.get<double>();
      } else if (key == "energy_cap_kwh") {
        p.energy_cap_kwh = value.get<double>();
      } else if (key == "grid") {
        p.grid.delta_t_hours = value.value("delta_t_hours", p.grid.delta_t_hours);
        p.grid.num_slots = value.value("num_slots", p.grid.num_slots);
        if (value.contains("start")) p.grid.start = parse_timestamp(value.at("start").get<std::string>());
      } else {
        throw std::invalid_argument("unknown key");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("policy." + key + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      // drop the "[json.exception.type_error.302] " prefix
      std::string what = e.what();
      if (auto cut = what.find("] "); cut != std::string::npos) what.erase(0, cut + 2);
      throw std::invalid_argument("policy." + key + ": " + what);
    }
  }
  check_policy(p);
  return p;
}

nlohmann::json policy_to_json(const GenPolicy& p) {
  return {{"count", p.count},
          {"gamma", {{"low", p.gamma_low}, {"high", p.gamma_high}}},
          {"tariff",
           {{"participating_rate", p.participating_rate},
            {"non_participating_rate", p.non_participating_rate},
            {"threshold", p.participation_threshold}}},
          {"kappa", p.kappa},
          {"max_power_kw", p.max_power_kw},
          {"efficiency", p.efficiency},
          {"power_cap_kw", p.power_cap_kw},
          {"energy_cap_kwh", p.energy_cap_kwh},
          {"grid",
           {{"delta_t_hours", p.grid.delta_t_hours},
            {"num_slots", p.grid.num_slots},
            {"start", format_timestamp(p.grid.start)}}}};
}

UtilityCurve random_utility(double e, double c_min, double gamma, int kappa, CounterRng& rng) {
  if (!(e > 0.0) || kappa < 1) throw std::invalid_argument("random utility needs E > 0 and kappa >= 1");
  const double spacing = e * 1e-3;
  std::vector<double> alpha;
  bool ok = false;
  for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
    alpha.assign(1, 0.0);
    std::vector<double> inner(kappa - 1);
    for (auto& a : inner) a = e * rng.uniform();
    std::sort(inner.begin(), inner.end());
    alpha.insert(alpha.end(), inner.begin(), inner.end());
    alpha.push_back(e);
    ok = true;
    for (int k = 1; k <= kappa; ++k) ok &= alpha[k] - alpha[k - 1] >= spacing;
  }
  if (!ok) {
    alpha.clear();
    for (int k = 0; k <= kappa; ++k) alpha.push_back(e * k / kappa);
    alpha.back() = e;
  }

  const double cap = c_min * gamma * e;
  std::vector<double> v(2 * kappa);
  for (auto& x : v) x = cap * rng.uniform();
  std::sort(v.begin(), v.end());
  v[0] = 0.0;
  std::vector<double> upper(kappa), lower(kappa);
  for (int k = 0; k < kappa; ++k) {
    upper[k] = v[2 * k];
    lower[k] = v[2 * k + 1];
  }
  return UtilityCurve::from_values(std::move(alpha), std::move(upper), std::move(lower));
}

GeneratedSessions generate_sessions(const CopulaModel& model, const GenPolicy& policy, std::uint64_t seed) {
  check_policy(policy);
  GeneratedSessions out;
  const std::int64_t max_draws = 1000LL * policy.count + 1000;
  char id[32];
  for (std::uint64_t draw = 0; static_cast<int>(out.sessions.size()) < policy.count; ++draw) {
    if (static_cast<std::int64_t>(draw) >= max_draws)
      throw std::runtime_error("session generation: too many draws fall outside the grid");
    const auto d = sample_copula_at(model, seed, draw);
    const auto to_seconds = [](double hours) { return std::chrono::seconds(std::llround(hours * 3600.0)); };
    const Timestamp arrival = policy.grid.start + to_seconds(d.arrival_hour);
    const Timestamp departure = policy.grid.start + to_seconds(d.departure_hour);
    SlotWindow w;
    try {
      w = snap_to_grid(arrival, departure, policy.grid);
    } catch (const SnapError&) {
      ++out.skipped;
      continue;
    }

    SessionSpec s;
    std::snprintf(id, sizeof id, "ev%04zu", out.sessions.size());
    s.id = id;
    s.arrival_slot = w.arrival_slot;
    s.departure_slot = w.departure_slot;
    // no pole delivers more than x_max over the window
    const double deliverable =
        policy.efficiency * policy.max_power_kw * policy.grid.delta_t_hours * (w.departure_slot - w.arrival_slot + 1);
    s.required_energy_kwh = d.energy_kwh;
    if (s.required_energy_kwh > deliverable) {
      s.required_energy_kwh = deliverable;
      ++out.clipped;
    }
    CounterRng gamma_rng(seed, stream_id("gamma", draw));
    s.gamma = gamma_rng.uniform(policy.gamma_low, policy.gamma_high);
    s.max_power_kw = policy.max_power_kw;
    s.efficiency = policy.efficiency;
    s.price_eur_per_kwh = {s.gamma < policy.participation_threshold ? policy.participating_rate
                                                                    : policy.non_participating_rate};
    CounterRng utility_rng(seed, stream_id("utility", draw));
    s.utility = random_utility(s.required_energy_kwh, min_price(s), s.gamma, policy.kappa, utility_rng);
    out.sessions.push_back(std::move(s));
  }
  return out;
}

Instance make_instance(const GenPolicy& policy, std::vector<SessionSpec> sessions) {
  Instance inst;
  inst.grid = policy.grid;
  inst.power_cap_kw = policy.power_cap_kw;
  inst.energy_cap_kwh = policy.energy_cap_kwh;
  inst.sessions = std::move(sessions);
  return inst;
}

nlohmann::json generation_report(const CopulaModel& model, const GenPolicy& policy, std::uint64_t seed,
                                 const GeneratedSessions& generated) {
  nlohmann::json r;
  nlohmann::json tau = nlohmann::json::array();
  nlohmann::json corr = nlohmann::json::array();
  for (int i = 0; i < kCopulaDim; ++i) {
    nlohmann::json trow = nlohmann::json::array(), crow = nlohmann::json::array();
    for (int j = 0; j < kCopulaDim; ++j) {
      trow.push_back(model.kendall_tau(i, j));
      crow.push_back(model.correlation(i, j));
    }
    tau.push_back(trow);
    corr.push_back(crow);
  }
  double full = 0.0, acceptable = 0.0;
  for (const auto& s : generated.sessions) {
    full += s.required_energy_kwh / s.efficiency;
    acceptable += s.gamma * s.required_energy_kwh / s.efficiency;
  }
  r["seed"] = seed;
  r["count"] = generated.sessions.size();
  r["skipped"] = generated.skipped;
  r["clipped"] = generated.clipped;
  r["columns"] = kCopulaColumns;
  r["kendall_tau"] = tau;
  r["correlation"] = corr;
  r["correlation_projected"] = model.projected;
  r["nu"] = model.nu;
  r["full_service_grid_kwh"] = full;
  r["acceptable_grid_kwh"] = acceptable;
  r["policy"] = policy_to_json(policy);
  return r;
}

}  // namespace evflex::datagen
