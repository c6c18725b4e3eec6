#pragma once

#include <cstdint>
#include <stdexcept>

#include "evflex/lp/simplex.hpp"
#include "evflex/solver/milp.hpp"
#include "evflex/solver/result.hpp"

namespace evflex {

enum class BranchRule {
  /// Binary closest to 0.5; ties to the lowest session, then lowest segment.
  MostFractional,
  /// First fractional binary in session/segment order.
  FirstFractional,
};

struct BnbConfig {
  /// Absolute optimality gap in EUR. Zero still allows 1e-9 of float slack.
  double gap = 0.01;
  double integrality_tolerance = 1e-6;
  std::int64_t node_limit = 1'000'000;
  double time_limit_seconds = 3600.0;
  BranchRule branching = BranchRule::MostFractional;
  /// Seed the search with greedy_incumbent().
  bool greedy_start = true;
  lp::SimplexOptions lp{};
};

/// Throws std::invalid_argument for a negative gap or an integrality
/// tolerance outside (0, 0.5).
void check_config(const BnbConfig& config);

/// Best-first branch-and-bound on the segment binaries, diving depth-first
/// until the first integral relaxation is found. Single worker, so the node
/// sequence is reproducible.
SolveResult solve(const MilpModel& model, const BnbConfig& config = {});

class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::int64_t required, std::int64_t budget);
  [[nodiscard]] std::int64_t required() const { return required_; }

 private:
  std::int64_t required_;
};

inline constexpr std::int64_t kBruteForceBudget = 20'000;

/// Solves one LP per segment pattern (each session: no segment, or exactly
/// one) from a cold start and keeps the best. `nodes` counts the LP solves.
SolveResult brute_force(const Instance& instance, std::int64_t budget = kBruteForceBudget);

}  // namespace evflex
