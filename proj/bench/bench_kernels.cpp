// OpenMP kernels against their serial references on refined pentagon meshes.
// Arguments: {refinement level, 0 = omp / 1 = serial}.

#include <benchmark/benchmark.h>

#include <vector>

#include "monofem/assembly.hpp"
#include "monofem/kernels.hpp"
#include "monofem/nonlinearity.hpp"

using namespace monofem;

namespace {

MeshPtr pentagon(int level) {
  return refine_uniform(triangulate_convex_polygon(preset_polygon("paper-pentagon")), level);
}

Exec exec_of(const benchmark::State& s) { return s.range(1) == 0 ? Exec::parallel : Exec::serial; }

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = -1.0 + 2.0 * static_cast<double>(i % 97) / 96.0;
  return v;
}

void BM_dot(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto x = ramp(n), y = ramp(n + 1);
  const Exec e = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(e, x, std::span(y).first(n)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_spmv(benchmark::State& state) {
  const P1Space space(pentagon(static_cast<int>(state.range(0))));
  const CsrMatrix a = assemble_stiffness(space);
  const auto x = ramp(a.n);
  std::vector<double> y(a.n);
  const Exec e = exec_of(state);
  for (auto _ : state) {
    kernels::spmv(e, a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(a.nnz());
}

void BM_stiffness(benchmark::State& state) {
  const P1Space space(pentagon(static_cast<int>(state.range(0))));
  const Exec e = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(space, e).values.data());
  state.counters["nv"] = static_cast<double>(space.mesh().num_vertices());
}

void BM_slope_matrix(benchmark::State& state) {
  const P1Space space(pentagon(static_cast<int>(state.range(0))));
  const std::size_t n = space.mesh().num_vertices();
  const auto u = ramp(n);
  std::vector<double> v(u);
  for (double& x : v) x -= 0.01;
  const Nonlinearity d = benchmark_nonlinearity();
  const Exec e = exec_of(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_slope_matrix(space, d, u, v, 1e-6, seven_point_rule(), e).values.data());
}

void BM_residual(benchmark::State& state) {
  const P1Space space(pentagon(static_cast<int>(state.range(0))));
  const auto u = ramp(space.mesh().num_vertices());
  const Nonlinearity d = benchmark_nonlinearity();
  const Exec e = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_nonlinear_residual(space, d, u, seven_point_rule(), e).data());
}

}  // namespace

BENCHMARK(BM_dot)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_spmv)->ArgsProduct({{5, 7}, {0, 1}});
BENCHMARK(BM_stiffness)->ArgsProduct({{5, 7}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_slope_matrix)->ArgsProduct({{5, 7}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_residual)->ArgsProduct({{5, 7}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
