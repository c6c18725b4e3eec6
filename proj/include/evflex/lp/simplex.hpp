#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "evflex/lp/kernels.hpp"
#include "evflex/lp/linear_program.hpp"

namespace evflex::lp {

enum class LpStatus { Optimal, Infeasible, IterationLimit };

const char* to_string(LpStatus status);

/// Basis snapshot: one status per variable (columns first, then one logical
/// per row) and the variable occupying each basis position.
struct Basis {
  std::vector<VarStatus> status;
  std::vector<int> head;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  std::vector<double> row_activity;
  double objective = 0.0;
  /// Shadow prices in the maximization sense.
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  /// Dual bound computed from the reduced-cost signs and the variable bounds.
  double dual_objective = 0.0;
  /// Rows carrying a nonzero Farkas multiplier when infeasible.
  std::vector<int> infeasible_rows;
  std::int64_t iterations = 0;
  Basis basis;
};

struct SimplexOptions {
  std::int64_t max_iterations = 2'000'000;
  int refactor_interval = 100;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 50;
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  bool parallel_kernels = true;
};

/// Cold-start solve with the default options and the given pivot budget.
LpSolution solve_lp(const LinearProgram& lp, std::int64_t max_iters = SimplexOptions{}.max_iterations);
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options);

/// Bounded-variable revised simplex over a fixed constraint matrix. Column
/// bounds may be changed between solves and the previous basis is reused,
/// which is how branch-and-bound re-solves its nodes.
///
/// Not thread-safe; one engine per thread.
class SimplexEngine {
 public:
  explicit SimplexEngine(const LinearProgram& lp, SimplexOptions options = {});
  ~SimplexEngine();
  SimplexEngine(SimplexEngine&&) noexcept;
  SimplexEngine& operator=(SimplexEngine&&) noexcept;

  void set_column_bounds(int column, double lower, double upper);
  /// Restores every column bound to the value in the source program.
  void reset_column_bounds();
  [[nodiscard]] double column_lower(int column) const;
  [[nodiscard]] double column_upper(int column) const;

  void load_basis(const Basis& basis);
  /// All-logical starting basis.
  void reset_basis();
  [[nodiscard]] Basis basis() const;

  /// Two-phase primal simplex from the current basis.
  LpSolution solve_primal();
  /// Dual simplex from the current basis. Boxed columns with the wrong
  /// reduced-cost sign are flipped to the other bound first; if the basis
  /// still is not dual feasible, or numerical trouble occurs, falls back to
  /// the primal method.
  LpSolution solve_dual();

  [[nodiscard]] std::int64_t total_iterations() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

/// Running record of the primal/dual objective agreement over every optimal
/// solve in the process.
struct DualityStats {
  std::int64_t checks = 0;
  double worst_relative_gap = 0.0;
};

DualityStats duality_stats();
void reset_duality_stats();

}  // namespace evflex::lp
