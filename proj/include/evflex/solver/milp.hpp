#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "evflex/lp/linear_program.hpp"
#include "evflex/model/instance.hpp"
#include "evflex/utility/encoding.hpp"

namespace evflex {

/// Column and row indices owned by one session.
struct SessionColumns {
  /// x[t - arrival_slot] for t in the availability window.
  std::vector<int> power;
  int served = -1;        // H, grid-side kWh
  int not_served = -1;    // phi, battery-side kWh
  int compensation = -1;  // Z
  EncodedUtility::Installed utility;
  int served_row = -1;
  int shortfall_row = -1;
};

/// The scheduling MILP of an instance, in maximization form:
///
///   max  dt * sum c[n,t] x[n,t] - sum Z[n]
///   H[n] = dt * sum_t x[n,t]                    served_energy[id]
///   phi[n] + eta[n] H[n] >= E[n]                shortfall[id]
///   utility encoding of (phi[n], Z[n])          z_link[id] ... one_segment[id]
///   p[t] = sum_n x[n,t],  0 <= p[t] <= p_cap    slot_power[t]
///   dt * sum_t p[t] <= E_cap                    energy_cap
///
/// x[n,t] only exists inside the session window, bounded by the pole limit.
/// H is bounded by what the window can deliver and by E/eta, so sessions are
/// never charged beyond full service.
struct MilpModel {
  Instance instance;
  lp::LinearProgram program;
  std::vector<SessionColumns> sessions;
  std::vector<int> slot_power;
  std::vector<int> slot_rows;
  int energy_row = -1;
  /// Segment binaries, ordered by session index then segment.
  std::vector<int> binaries;
  /// Session index and segment k (1-based) of each entry in `binaries`.
  std::vector<std::pair<int, int>> binary_owner;

  /// Column index for a semantic name such as "x[ev7,40]" or "Z[ev7]".
  [[nodiscard]] std::optional<int> find(const std::string& name) const;
  /// Column of x[n,t]; -1 outside the window.
  [[nodiscard]] int power_column(int n, int t) const;

  std::unordered_map<std::string, int> registry;
};

/// Validates and assembles. Throws ValidationError on an invalid instance.
MilpModel build_model(const Instance& instance);

}  // namespace evflex
