#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "normwave/radial.hpp"

using namespace normwave;

namespace {

RadialField gaussian(GridPtr g) {
  RadialField u(g);
  for (std::size_t j = 0; j < g->size(); ++j) u[j] = std::exp(-g->node(j) * g->node(j) / 4.0);
  return u;
}

}  // namespace

static void BM_BandedSolve(benchmark::State& state) {
  const GridPtr g = make_grid(static_cast<std::size_t>(state.range(0)), 30.0);
  ComplexBand A(g->size(), kStencilHalfWidth);
  for (std::size_t i = 0; i < g->size(); ++i)
    for (std::size_t j = (i >= kStencilHalfWidth ? i - kStencilHalfWidth : 0);
         j <= std::min(g->size() - 1, i + kStencilHalfWidth); ++j)
      A(i, j) = std::complex<double>(0.0, 5e-5) * g->stiffness()(i, j) + (i == j ? g->weights()[i] : 0.0);
  A.factorize();
  std::vector<std::complex<double>> rhs(g->size(), 1.0);
  for (auto _ : state) {
    A.solve_in_place(rhs);
    benchmark::DoNotOptimize(rhs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BandedSolve)->RangeMultiplier(4)->Range(1024, 16384);

static void BM_KineticAndQuartic(benchmark::State& state) {
  const GridPtr g = make_grid(static_cast<std::size_t>(state.range(0)), 30.0);
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 2.0);
  const FieldList U{gaussian(g), gaussian(g)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kinetic_sum(U));
    benchmark::DoNotOptimize(quartic_sum(U, p));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KineticAndQuartic)->RangeMultiplier(4)->Range(1024, 16384);

static void BM_Dilate(benchmark::State& state) {
  const GridPtr g = make_grid(static_cast<std::size_t>(state.range(0)), 30.0);
  const RadialField u = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(dilate(0.3, u));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dilate)->RangeMultiplier(4)->Range(1024, 16384);

static void BM_GradJ(benchmark::State& state) {
  const GridPtr g = make_grid(static_cast<std::size_t>(state.range(0)), 30.0);
  const SystemParams p = SystemParams::two(1.0, 1.0, 1.0, 1.0, 2.0);
  const FieldList U{gaussian(g), gaussian(g)};
  for (auto _ : state) benchmark::DoNotOptimize(grad_J(U, p));
}
BENCHMARK(BM_GradJ)->Arg(4096);
