#include <benchmark/benchmark.h>

#include "gpwtdg/analytic.hpp"
#include "gpwtdg/assembly.hpp"
#include "gpwtdg/solver.hpp"

using namespace gpwtdg;

namespace {

Mesh level_mesh(int level) {
  Mesh m = build_structured_mesh({-1, -1, 1, 1}, {2, 2});
  for (int i = 0; i < level; ++i) m = refine_uniform(m);
  return m;
}

void BM_BuildBasis(benchmark::State& state) {
  const CoefficientField airy = make_airy_field();
  const int q = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const GpwBasisSet basis = build_basis_set(airy, {0.2, -0.3}, 0, 15.0, 2, q);
    benchmark::DoNotOptimize(basis.function(0).coeffs().at(1, 0));
  }
}
BENCHMARK(BM_BuildBasis)->Arg(3)->Arg(5);

void BM_EvaluateGpw(benchmark::State& state) {
  const CoefficientField airy = make_airy_field();
  const GpwFunction gpw = build_gpw(airy, {0.2, -0.3}, 15.0, 4, 0.7,
                                    default_normalization(airy, {0.2, -0.3}, 15.0));
  double x = 0.21;
  for (auto _ : state) {
    const WaveSample s = gpw.evaluate({x, -0.29});
    benchmark::DoNotOptimize(s.laplacian);
    x += 1e-9;
  }
}
BENCHMARK(BM_EvaluateGpw);

void BM_Assemble(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const CoefficientField airy = make_airy_field();
  const Mesh mesh = level_mesh(level);
  const double kappa = 15.0;
  const auto bases = build_all_bases(airy, mesh, kappa, 2, 3);
  DgParameters params;
  params.gamma0 = 1.0;
  params.gamma_exponent = 3.0;
  const ExactSolution exact = make_exact_airy(kappa);
  const RobinData g = [&](Point p, Vec2 n) { return impedance_trace(exact, p, n); };
  for (auto _ : state) {
    const BlockSystem system = assemble_system(mesh, bases, airy, kappa, params, g);
    benchmark::DoNotOptimize(system.rhs().norm());
  }
  state.SetItemsProcessed(state.iterations() * mesh.num_elements());
}
BENCHMARK(BM_Assemble)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const CoefficientField airy = make_airy_field();
  const Mesh mesh = level_mesh(level);
  const double kappa = 15.0;
  const auto bases = build_all_bases(airy, mesh, kappa, 2, 3);
  DgParameters params;
  params.gamma0 = 1.0;
  params.gamma_exponent = 3.0;
  const ExactSolution exact = make_exact_airy(kappa);
  const RobinData g = [&](Point p, Vec2 n) { return impedance_trace(exact, p, n); };
  const BlockSystem system = assemble_system(mesh, bases, airy, kappa, params, g);
  for (auto _ : state) {
    const SolveReport report = solve_direct(system);
    benchmark::DoNotOptimize(report.relative_residual);
  }
  state.SetItemsProcessed(state.iterations() * system.dimension());
}
BENCHMARK(BM_Solve)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
