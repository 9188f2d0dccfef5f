#include "chemolab/elliptic.hpp"
#include "chemolab/front.hpp"
#include "chemolab/stepper.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace chemolab;

namespace {

ParameterSet p1() {
  ParameterSet p;
  p.chi = p.lambda = p.mu = 1.0;
  p.dims = 1;
  p.a = {1.5, 0.25, 20.0, 0.25, 10.0};
  p.b = {5.5, 0.25, 20.0, 0.25, 10.0};
  return p;
}

ScalarField bump(const Grid& g, double r) {
  return field_from_function(g, [&](std::span<const double> x, double) {
    double d2 = x[0] * x[0];
    if (x.size() == 2)
      d2 += x[1] * x[1];
    const double s = 1.0 - d2 / (r * r);
    return s > 0.0 ? s * s : 0.0;
  });
}

Grid square(std::size_t n) {
  const double e[2] = {40.0, 40.0};
  const std::size_t pts[2] = {n, n};
  return Grid(2, e, pts, Boundary::periodic);
}

void BM_EllipticSolve1D(benchmark::State& state) {
  const Grid g = Grid::line(200.0, static_cast<std::size_t>(state.range(0)), Boundary::periodic);
  ChemicalSolver solver(g);
  const ScalarField u = bump(g, 20.0);
  ScalarField v(g);
  for (auto _ : state) {
    solver.solve(u, 1.0, 1.0, v);
    benchmark::DoNotOptimize(v.values.data());
  }
}
BENCHMARK(BM_EllipticSolve1D)->Arg(256)->Arg(2048)->Arg(16384);

void BM_EllipticSolve2D(benchmark::State& state) {
  const Grid g = square(static_cast<std::size_t>(state.range(0)));
  ChemicalSolver solver(g);
  const ScalarField u = bump(g, 10.0);
  ScalarField v(g);
  for (auto _ : state) {
    solver.solve(u, 1.0, 1.0, v);
    benchmark::DoNotOptimize(v.values.data());
  }
}
BENCHMARK(BM_EllipticSolve2D)->Arg(64)->Arg(256);

void BM_Step1D(benchmark::State& state) {
  const Grid g = Grid::line(200.0, static_cast<std::size_t>(state.range(0)), Boundary::periodic);
  Stepper stepper(p1(), g);
  SimState s = stepper.initial_state(bump(g, 20.0), 0.0);
  const double dt = stepper.stable_dt(s);
  for (auto _ : state)
    stepper.step(s, dt);
}
BENCHMARK(BM_Step1D)->Arg(256)->Arg(2048);

void BM_Step2D(benchmark::State& state) {
  ParameterSet p = p1();
  p.dims = 2;
  const Grid g = square(static_cast<std::size_t>(state.range(0)));
  Stepper stepper(p, g);
  SimState s = stepper.initial_state(bump(g, 10.0), 0.0);
  const double dt = stepper.stable_dt(s);
  for (auto _ : state)
    stepper.step(s, dt);
}
BENCHMARK(BM_Step2D)->Arg(64)->Arg(128);

void BM_FrontPosition(benchmark::State& state) {
  const Grid g = square(static_cast<std::size_t>(state.range(0)));
  const ScalarField u = bump(g, 10.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(front_position(u, 0.5, FrontTracking::radial()));
}
BENCHMARK(BM_FrontPosition)->Arg(128)->Arg(512);

} // namespace

BENCHMARK_MAIN();
