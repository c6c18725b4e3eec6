#include "evflex/lp/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace evflex::lp::kernels {

namespace {

inline double column_dot(const CscMatrix& a, int j, std::span<const double> y) {
  double sum = 0.0;
  for (int p = a.start[j]; p < a.start[j + 1]; ++p) sum += a.value[p] * y[a.index[p]];
  return sum;
}

inline double eligibility_score(double d, VarStatus s, double lo, double hi, double tol) {
  if (s == VarStatus::Basic || lo == hi) return 0.0;
  if (s == VarStatus::AtLower && d < -tol) return -d;
  if (s == VarStatus::AtUpper && d > tol) return d;
  return 0.0;
}

}  // namespace

void transpose_product_serial(const CscMatrix& a, std::span<const double> y, std::span<double> out) {
  for (int j = 0; j < a.cols; ++j) out[j] = column_dot(a, j, y);
}

void transpose_product_parallel(const CscMatrix& a, std::span<const double> y, std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < a.cols; ++j) out[j] = column_dot(a, j, y);
}

int dantzig_select_serial(std::span<const double> reduced_costs, std::span<const VarStatus> status,
                          std::span<const double> lower, std::span<const double> upper, double tol) {
  int best = -1;
  double best_score = 0.0;
  const int count = static_cast<int>(reduced_costs.size());
  for (int j = 0; j < count; ++j) {
    const double score = eligibility_score(reduced_costs[j], status[j], lower[j], upper[j], tol);
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

int dantzig_select_parallel(std::span<const double> reduced_costs, std::span<const VarStatus> status,
                            std::span<const double> lower, std::span<const double> upper, double tol) {
#ifdef _OPENMP
  const int count = static_cast<int>(reduced_costs.size());
  const int threads = omp_get_max_threads();
  std::vector<int> local_best(threads, -1);
  std::vector<double> local_score(threads, 0.0);
#pragma omp parallel num_threads(threads)
  {
    const int tid = omp_get_thread_num();
    const int nth = omp_get_num_threads();
    const int chunk = (count + nth - 1) / nth;
    const int begin = tid * chunk;
    const int end = std::min(count, begin + chunk);
    int best = -1;
    double best_score = 0.0;
    for (int j = begin; j < end; ++j) {
      const double score = eligibility_score(reduced_costs[j], status[j], lower[j], upper[j], tol);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    local_best[tid] = best;
    local_score[tid] = best_score;
  }
  // Chunks are in index order, so a strict comparison keeps the lowest index on ties.
  int best = -1;
  double best_score = 0.0;
  for (int t = 0; t < threads; ++t) {
    if (local_best[t] >= 0 && local_score[t] > best_score) {
      best_score = local_score[t];
      best = local_best[t];
    }
  }
  return best;
#else
  return dantzig_select_serial(reduced_costs, status, lower, upper, tol);
#endif
}

int available_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace evflex::lp::kernels
