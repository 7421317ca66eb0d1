#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "fujita/domain_grid.hpp"
#include "fujita/integrator.hpp"
#include "fujita/operators.hpp"
#include "fujita/supersolution.hpp"
#include "fujita/tridiagonal.hpp"

using namespace fujita;

namespace {

Grid ball_grid(std::size_t m) { return build_grid(DomainSpec::exterior_ball(3, 1.0), 20.0, m); }

BoundaryCondition robin1() { return BoundaryCondition::robin(TimeCoefficient::constant(1.0)); }

Field bump(const Grid& g) {
    Field f;
    f.values.resize(g.size());
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double r = g.node(i);
        f.values[i] = 0.5 * std::exp(-(r - 1.0) * (r - 1.0));
    }
    return f;
}

}  // namespace

static void BM_Tridiagonal(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> sub(n, -1.0), diag(n, 4.0), sup(n, -1.0), rhs(n, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_tridiagonal(sub, diag, sup, rhs));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Tridiagonal)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

static void BM_Assemble(benchmark::State& state) {
    const auto g = ball_grid(static_cast<std::size_t>(state.range(0)));
    const auto op = OperatorSpec::laplacian(2.0);
    const auto bc = robin1();
    for (auto _ : state) benchmark::DoNotOptimize(assemble_diffusion(g, op, bc, 0.0));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(4)->Range(64, 16384);

static void BM_Step(benchmark::State& state) {
    const auto g = ball_grid(static_cast<std::size_t>(state.range(0)));
    const auto op = assemble_diffusion(g, OperatorSpec::laplacian(2.0), robin1(), 0.0);
    const Nonlinearity nl;
    const auto u = bump(g);
    for (auto _ : state) benchmark::DoNotOptimize(step(u, 1e-3, op, g, nl));
}
BENCHMARK(BM_Step)->RangeMultiplier(4)->Range(64, 16384);

static void BM_VerifyInterior(benchmark::State& state) {
    const auto domain = DomainSpec::exterior_ball(3, 1.0);
    const auto g = ball_grid(400);
    const auto op = OperatorSpec::laplacian(2.0);
    const auto params = select_params(op, domain, g, 0.0, 0.9);
    SampleBox box;
    box.radial = static_cast<std::size_t>(state.range(0));
    box.temporal = box.radial / 2;
    for (auto _ : state) benchmark::DoNotOptimize(verify_interior(params, op, domain, box));
}
BENCHMARK(BM_VerifyInterior)->Arg(100)->Arg(400)->Arg(1600);

BENCHMARK_MAIN();
