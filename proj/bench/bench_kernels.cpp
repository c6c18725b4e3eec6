#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "evflex/lp/kernels.hpp"
#include "evflex/lp/simplex.hpp"
#include "evflex/model/instance_io.hpp"
#include "evflex/solver/milp.hpp"

using namespace evflex;
using namespace evflex::lp;

namespace {

// Roughly the shape of the scheduling LP: few nonzeros per column.
CscMatrix random_csc(int rows, int cols, int per_col, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> row(0, rows - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  CscMatrix a;
  a.rows = rows;
  a.cols = cols;
  a.start.push_back(0);
  for (int j = 0; j < cols; ++j) {
    std::vector<int> picked;
    while (static_cast<int>(picked.size()) < per_col) {
      const int r = row(rng);
      if (std::find(picked.begin(), picked.end(), r) == picked.end()) picked.push_back(r);
    }
    std::sort(picked.begin(), picked.end());
    for (int r : picked) {
      a.index.push_back(r);
      a.value.push_back(val(rng));
    }
    a.start.push_back(static_cast<int>(a.index.size()));
  }
  return a;
}

template <bool Parallel>
void BM_TransposeProduct(benchmark::State& state) {
  const int cols = static_cast<int>(state.range(0));
  const auto a = random_csc(cols / 4, cols, 4, 1);
  std::vector<double> y(a.rows, 0.5), out(cols);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::transpose_product_parallel(a, y, out);
    else
      kernels::transpose_product_serial(a, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * a.index.size());
  state.counters["threads"] = Parallel ? kernels::available_threads() : 1;
}

template <bool Parallel>
void BM_DantzigSelect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> d(n), lo(n, 0.0), hi(n, 1.0);
  std::vector<VarStatus> status(n);
  for (int j = 0; j < n; ++j) {
    d[j] = u(rng);
    status[j] = j % 7 == 0 ? VarStatus::Basic : (j % 2 ? VarStatus::AtLower : VarStatus::AtUpper);
  }
  for (auto _ : state) {
    const int pick = Parallel ? kernels::dantzig_select_parallel(d, status, lo, hi, 1e-9)
                              : kernels::dantzig_select_serial(d, status, lo, hi, 1e-9);
    benchmark::DoNotOptimize(pick);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

// Root relaxation of the shipped 400-session instance.
void BM_SeedRootLp(benchmark::State& state) {
  const auto model = build_model(load_instance(EVFLEX_DATA_DIR "/seed_instance.json"));
  SimplexOptions options;
  options.parallel_kernels = state.range(0) != 0;
  for (auto _ : state) {
    auto sol = solve_lp(model.program, options);
    benchmark::DoNotOptimize(sol.objective);
  }
}

}  // namespace

BENCHMARK(BM_TransposeProduct<false>)->Name("transpose_product/serial")->Range(1 << 12, 1 << 18);
BENCHMARK(BM_TransposeProduct<true>)->Name("transpose_product/parallel")->Range(1 << 12, 1 << 18);
BENCHMARK(BM_DantzigSelect<false>)->Name("dantzig_select/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_DantzigSelect<true>)->Name("dantzig_select/parallel")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_SeedRootLp)->Name("seed_root_lp")->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
