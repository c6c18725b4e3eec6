#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "evflex/model/instance.hpp"

namespace evflex {

enum class SolveStatus {
  Optimal,
  /// Tree exhausted, but some nodes were pruned against the absolute gap.
  GapReached,
  /// Node or time limit hit; the incumbent, if any, is reported.
  Limit,
  Infeasible,
  /// Greedy construction, no optimality claim.
  Heuristic,
};

const char* to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  bool has_solution = false;
  Schedule schedule;
  /// Per session: grid energy H, shortfall phi, compensation Z, and the
  /// active segment (0 = none).
  std::vector<double> served;
  std::vector<double> phi;
  std::vector<double> z;
  std::vector<int> segment;
  double objective = 0.0;
  double best_bound = 0.0;
  /// best_bound - objective.
  double gap = 0.0;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double wall_seconds = 0.0;
};

/// Rebuilds every derived quantity of a schedule: H from x,
/// phi = max(0, E - eta*H) (snapped onto a breakpoint within 1e-9),
/// Z = u(phi), the segment holding phi and the objective. The schedule must
/// already satisfy the physical limits.
void canonicalize(const Instance& instance, SolveResult& result);

/// Earliest-slot-first filling, sessions by descending minimum price.
/// Always feasible; status Heuristic.
SolveResult greedy_incumbent(const Instance& instance);

struct Residual {
  std::string row;
  double value = 0.0;
};

struct ResidualReport {
  double tolerance = 1e-6;
  Residual worst;
  /// Every check above tolerance, in discovery order.
  std::vector<Residual> violations;
  std::int64_t checks = 0;

  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Recomputes every model row from the reported schedule, phi and Z.
ResidualReport verify_solution(const Instance& instance, const SolveResult& result, double tolerance = 1e-6);

/// Rows are sessions, columns slots, values kW.
void write_schedule_csv(const Instance& instance, const SolveResult& result, std::ostream& out);
/// id,phi_kwh,Z_eur,segment
void write_sessions_csv(const Instance& instance, const SolveResult& result, std::ostream& out);
nlohmann::json run_metadata(const SolveResult& result);

}  // namespace evflex
