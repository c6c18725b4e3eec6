#pragma once

#include <string>
#include <vector>

#include "evflex/lp/linear_program.hpp"
#include "evflex/utility/utility_curve.hpp"

namespace evflex {

/// Multiple-choice encoding of a utility curve: (phi, Z) is a convex
/// combination of the endpoints of at most one active segment.
///
/// Columns: lambda_low[0..kappa], lambda_up[0..kappa-1] (weights on the lower
/// and upper endpoint values at each breakpoint) and binary segment[1..kappa].
/// Rows:
///   Z   = sum_{k<kappa} (lambda_low[k] u_low[k] + lambda_up[k] u_bar[k]) + lambda_low[kappa] u_low[kappa]
///   phi = sum_{k<kappa} (lambda_low[k] + lambda_up[k]) alpha[k] + lambda_low[kappa] alpha[kappa]
///   sum of all lambdas = 1
///   lambda_up[k] + lambda_low[k+1] = segment[k+1]     for k < kappa
///   sum of segment[k] <= 1
struct EncodedUtility {
  enum class Var { Phi, Compensation, LambdaLow, LambdaUp, Segment };

  struct Ref {
    Var var;
    int k = 0;
  };

  struct Column {
    Ref ref;
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    bool binary = false;
  };

  struct RowTerm {
    Ref ref;
    double coefficient = 0.0;
  };

  struct Row {
    std::string name;
    std::vector<RowTerm> terms;
    double lower = 0.0;
    double upper = 0.0;
  };

  /// Column indices of an encoding installed into a program.
  struct Installed {
    std::vector<int> lambda_low;
    std::vector<int> lambda_up;
    /// segment[k-1] holds the binary of segment k.
    std::vector<int> segment;
    std::vector<int> rows;
  };

  int kappa = 0;
  std::vector<Column> columns;
  std::vector<Row> rows;

  [[nodiscard]] int num_multipliers() const { return 2 * kappa + 1; }
  [[nodiscard]] int num_binaries() const { return kappa; }

  /// Adds the columns and rows to `lp`, linking to existing phi and Z columns.
  /// Names get `tag` spliced in, e.g. lam_lo[tag,2].
  Installed install(lp::LinearProgram& lp, int phi_column, int compensation_column, const std::string& tag) const;
};

[[nodiscard]] EncodedUtility encode(const UtilityCurve& curve);

}  // namespace evflex
