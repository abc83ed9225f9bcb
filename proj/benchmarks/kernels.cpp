#include <cmath>
#include <memory>
#include <string>

#include <benchmark/benchmark.h>

#include "mslab/assembly.hpp"
#include "mslab/config.hpp"
#include "mslab/scheme.hpp"
#include "mslab/stepper.hpp"

using namespace mslab;

namespace {

// 1D meshes use h = 2 / n, 2D meshes h = 2 / sqrt(n) on (-1,1)^2.
Mesh mesh_for(int dim, int n) {
  return dim == 1 ? build_mesh(Interval{-1, 1}, 2.0 / n)
                  : build_mesh(Rectangle{-1, 1, -1, 1}, 2.0 / std::sqrt(n));
}

void BM_AssembleStiffness(benchmark::State& state) {
  const Mesh mesh = mesh_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const Field weight = Field::p0(mesh, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness_p1(mesh, weight));
  state.counters["cells"] = mesh.num_cells();
}
BENCHMARK(BM_AssembleStiffness)->Args({1, 2000})->Args({1, 20000})->Args({2, 4096})->Args({2, 65536});

struct StepFixture {
  explicit StepFixture(const std::string& doc) : config(parse_config(doc)), setup(build_setup(config)) {
    const double ub = run_u_breve(setup.model, setup.problem, setup.grid, setup.u0);
    phi = std::make_unique<RegularizedPhi>(run_regularization(setup.model, ub));
  }
  RunConfig config;
  RunSetup setup;
  std::unique_ptr<RegularizedPhi> phi;
};

void BM_LinearIteration(benchmark::State& state) {
  const StepFixture f(state.range(0) == 1 ? "h = 1e-3\ntau = 0.01\n"
                                          : "model = biofilm\ndim = 2\nh = 0.02\ntau = 0.01\n");
  const auto& s = f.setup;
  const double tau = s.grid.tau;
  const Field h_field = growth_factor_field(s.model, s.v0, tau);
  const Field l = l_factor_field(s.scheme, *f.phi, s.u0, tau);
  for (auto _ : state)
    benchmark::DoNotOptimize(linear_iteration(s.problem, h_field, s.u0, s.u0, l, *f.phi, tau));
  state.counters["cells"] = s.problem.mesh().num_cells();
}
BENCHMARK(BM_LinearIteration)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_NonlinearStep(benchmark::State& state) {
  const bool newton = state.range(1) == 1;
  StepFixture f(state.range(0) == 0 ? "h = 1e-3\ntau = 0.1\n"
                                    : "model = biofilm\nh = 1e-3\ntau = 0.1\n");
  auto& s = f.setup;
  if (newton) s.scheme.kind = NewtonScheme{1e-7, s.scheme.gamma()};
  const Field w0 = initial_w(s.problem, *f.phi, s.u0);
  int iterations = 0;
  for (auto _ : state) {
    const StepResult r = solve_nonlinear_step(s.problem, s.model, *f.phi, s.scheme, s.u0, s.v0, w0,
                                              s.grid.tau);
    iterations = r.trace.iterations;
    benchmark::DoNotOptimize(r.u);
  }
  state.counters["iterations"] = iterations;
}
BENCHMARK(BM_NonlinearStep)
    ->ArgNames({"biofilm", "newton"})
    ->Args({0, 0})
    ->Args({0, 1})
    ->Args({1, 0})
    ->Args({1, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
