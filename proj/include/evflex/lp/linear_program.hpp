#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace evflex::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  double objective = 0.0;
};

struct Term {
  int column = 0;
  double coefficient = 0.0;
};

/// A row `lower <= sum(terms) <= upper`. Equality rows have lower == upper;
/// one side may be infinite.
struct Row {
  std::string name;
  std::vector<Term> terms;
  double lower = -kInfinity;
  double upper = kInfinity;
};

/// Bounded linear program in maximization form. All column bounds must be
/// finite; rows may be one-sided.
class LinearProgram {
 public:
  int add_column(std::string name, double lower, double upper, double objective);
  int add_row(std::string name, std::vector<Term> terms, double lower, double upper);

  void set_column_bounds(int column, double lower, double upper);
  void set_objective(int column, double coefficient);

  [[nodiscard]] int num_columns() const { return static_cast<int>(columns_.size()); }
  [[nodiscard]] int num_rows() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] const std::vector<Column>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
  [[nodiscard]] const Column& column(int j) const { return columns_.at(j); }
  [[nodiscard]] const Row& row(int i) const { return rows_.at(i); }

  /// Objective value of a primal point.
  [[nodiscard]] double objective_value(const std::vector<double>& x) const;
  /// Row activity a_i . x.
  [[nodiscard]] double row_activity(int i, const std::vector<double>& x) const;
  /// Largest bound or row violation of a primal point, scaled by
  /// max(1, |bound|).
  [[nodiscard]] double max_primal_violation(const std::vector<double>& x) const;

  /// Throws std::invalid_argument on infinite column bounds, crossed bounds,
  /// free rows, out-of-range column references or duplicate terms.
  void check_well_formed() const;

 private:
  std::vector<Column> columns_;
  std::vector<Row> rows_;
};

/// Writes the LP in fixed-format MPS. Objective is negated into the usual
/// minimization convention; columns appear in index order. Debug aid only.
void write_fixed_mps(const LinearProgram& lp, std::ostream& out, const std::string& name = "EVFLEX");

}  // namespace evflex::lp
