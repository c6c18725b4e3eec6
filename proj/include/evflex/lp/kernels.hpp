#pragma once

// Data-parallel inner loops of the simplex iteration. Every kernel has a
// serial reference implementation and an OpenMP version; both produce
// bit-identical results because each output element is computed by a single
// thread in the same summation order.

#include <cstdint>
#include <span>
#include <vector>

namespace evflex::lp {

/// Compressed sparse column storage of the structural part of the
/// constraint matrix.
struct CscMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> start;  // size cols + 1
  std::vector<int> index;
  std::vector<double> value;
};

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

namespace kernels {

/// out[j] = a_j . y for every column j of `a`.
void transpose_product_serial(const CscMatrix& a, std::span<const double> y, std::span<double> out);
void transpose_product_parallel(const CscMatrix& a, std::span<const double> y, std::span<double> out);

/// Dantzig pricing for a minimization: returns the eligible variable with the
/// largest |d_j| (ties to the lowest index), or -1 when none is eligible.
/// Eligible means nonbasic, not fixed, and d_j < -tol at lower or d_j > tol at
/// upper.
int dantzig_select_serial(std::span<const double> reduced_costs, std::span<const VarStatus> status,
                          std::span<const double> lower, std::span<const double> upper, double tol);
int dantzig_select_parallel(std::span<const double> reduced_costs, std::span<const VarStatus> status,
                            std::span<const double> lower, std::span<const double> upper, double tol);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int available_threads();

}  // namespace kernels
}  // namespace evflex::lp
