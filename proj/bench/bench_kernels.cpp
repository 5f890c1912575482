// SPDX-License-Identifier: Apache-2.0
//
// Serial reference kernels against their OpenMP counterparts, plus a full RK4+MSD step.

#include <benchmark/benchmark.h>

#include <cmath>

#include "msd/integrate.hpp"
#include "msd/kernels.hpp"

using namespace msd;

namespace
{

Grid bench_grid(int dim, int n) { return Grid::centered(dim, n, 0.25); }

ComplexField bench_field(const Grid &g)
{
  return ComplexField::sample(g, [](const Point &x)
                              { return cplx(std::cos(x[0] + 0.3 * x[1]), std::sin(0.7 * x[0] - x[2])); });
}

template <auto Kernel>
void laplacian_bench(benchmark::State &state)
{
  const Grid g = bench_grid(int(state.range(0)), int(state.range(1)));
  const auto psi = bench_field(g);
  ComplexField out(g);
  for (auto _ : state)
  {
    Kernel(g, psi.values(), out.values());
    benchmark::DoNotOptimize(out.values().data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.size()));
}

template <auto Kernel>
void rhs_bench(benchmark::State &state)
{
  const Grid g = bench_grid(int(state.range(0)), int(state.range(1)));
  const auto psi = bench_field(g);
  ComplexField out(g);
  const kernels::RhsCoefficients c{1.0, -1.0, {}};
  for (auto _ : state)
  {
    Kernel(g, psi.values(), c, out.values());
    benchmark::DoNotOptimize(out.values().data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.size()));
}

void step_bench(benchmark::State &state, Exec exec)
{
  const Grid g = bench_grid(int(state.range(0)), int(state.range(1)));
  auto psi = bench_field(g);
  Stepper stepper(g, NlseParams(1.0, -1.0), bc::Msd{}, StepperConfig{1e-4, Scheme::rk4, 1e6, exec});
  double t = 0.0;
  for (auto _ : state)
  {
    t = stepper.step(psi, t);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(g.size()));
}

void sizes(benchmark::internal::Benchmark *b)
{
  b->Args({1, 1 << 16})->Args({2, 256})->Args({2, 1024})->Args({3, 64})->Args({3, 128});
}

}  // namespace

BENCHMARK(laplacian_bench<&kernels::serial::laplacian>)->Name("laplacian/serial")->Apply(sizes);
BENCHMARK(laplacian_bench<&kernels::parallel::laplacian>)->Name("laplacian/parallel")->Apply(sizes)->UseRealTime();
BENCHMARK(rhs_bench<&kernels::serial::nlse_rhs>)->Name("rhs/serial")->Apply(sizes);
BENCHMARK(rhs_bench<&kernels::parallel::nlse_rhs>)->Name("rhs/parallel")->Apply(sizes)->UseRealTime();
BENCHMARK_CAPTURE(step_bench, serial, Exec::serial)->Name("rk4_msd_step/serial")->Apply(sizes);
BENCHMARK_CAPTURE(step_bench, parallel, Exec::parallel)->Name("rk4_msd_step/parallel")->Apply(sizes)->UseRealTime();

BENCHMARK_MAIN();
