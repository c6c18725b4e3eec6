#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "evflex/datagen/copula.hpp"
#include "evflex/datagen/rng.hpp"
#include "evflex/model/instance.hpp"

namespace evflex::datagen {

struct GenPolicy {
  int count = 400;
  double gamma_low = 0.5;
  double gamma_high = 1.0;
  /// Tariff: participating_rate when gamma < participation_threshold.
  double participating_rate = 0.30;
  double non_participating_rate = 0.35;
  double participation_threshold = 0.99;
  int kappa = 4;
  double max_power_kw = 22.0;
  double efficiency = 0.92;
  double power_cap_kw = 700.0;
  double energy_cap_kwh = 8200.0;
  TimeGrid grid;
};

/// Throws std::invalid_argument naming the offending field.
void check_policy(const GenPolicy& policy);

/// Missing keys keep their defaults; unknown keys are rejected.
GenPolicy policy_from_json(const nlohmann::json& doc);
nlohmann::json policy_to_json(const GenPolicy& policy);

/// Random capped curve: kappa-1 sorted interior breakpoints in (0, E) and
/// 2*kappa sorted endpoint values in [0, c_min*gamma*E], first one forced to 0.
UtilityCurve random_utility(double e, double c_min, double gamma, int kappa, CounterRng& rng);

struct GeneratedSessions {
  std::vector<SessionSpec> sessions;
  /// Draws dropped because their window fell outside the grid.
  std::int64_t skipped = 0;
  /// Sessions whose energy was cut to what the pole delivers in the window.
  std::int64_t clipped = 0;
};

/// Draws sessions until policy.count of them snap onto the grid. Session i's
/// gamma and utility come from their own streams keyed by the draw index.
GeneratedSessions generate_sessions(const CopulaModel& model, const GenPolicy& policy, std::uint64_t seed);

/// Instance with the policy's grid and caps.
Instance make_instance(const GenPolicy& policy, std::vector<SessionSpec> sessions);

nlohmann::json generation_report(const CopulaModel& model, const GenPolicy& policy, std::uint64_t seed,
                                 const GeneratedSessions& generated);

}  // namespace evflex::datagen
