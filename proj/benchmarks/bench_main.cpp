#include <random>

#include <benchmark/benchmark.h>

#include <ccpareto/bench.hpp>
#include <ccpareto/cc1.hpp>
#include <ccpareto/oracle.hpp>
#include <ccpareto/scalarize.hpp>
#include <ccpareto/simplex.hpp>
#include <ccpareto/solver.hpp>

using namespace ccpareto;

namespace {

// Random feasible LP: min c'x over a polytope containing the box center.
LinearProgram random_lp(int n, int rows, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LinearProgram lp(n);
    for (int j = 0; j < n; ++j) {
        lp.cost[j] = u(rng);
        lp.upper[j] = 10.0;
    }
    for (int r = 0; r < rows; ++r) {
        Vector a(n);
        for (int j = 0; j < n; ++j) {
            a[j] = u(rng);
        }
        lp.add_less_equal(a, a.sum() * 5.0 + 1.0 + u(rng) * u(rng));
    }
    return lp;
}

void BM_Simplex(benchmark::State &state)
{
    const int n = static_cast<int>(state.range(0));
    const auto lp = random_lp(n, 2 * n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_linear_program(lp));
    }
}
BENCHMARK(BM_Simplex)->Arg(5)->Arg(20)->Arg(50);

void BM_SolveCharnesCooper(benchmark::State &state, const char *id)
{
    const auto named = get_problem(id);
    const auto x0 = *sample_start(named.problem, 3, 0);
    const auto sub = charnes_cooper(named.problem, x0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(sub, {}, x0));
    }
}
BENCHMARK_CAPTURE(BM_SolveCharnesCooper, schaffer, "schaffer");
BENCHMARK_CAPTURE(BM_SolveCharnesCooper, jahn, "jahn");
BENCHMARK_CAPTURE(BM_SolveCharnesCooper, maxabs, "maxabs");

void BM_RunCC1(benchmark::State &state, const char *id)
{
    const auto named = get_problem(id);
    const auto x0 = *sample_start(named.problem, 3, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_cc1(named.problem, x0));
    }
}
BENCHMARK_CAPTURE(BM_RunCC1, schaffer, "schaffer");
BENCHMARK_CAPTURE(BM_RunCC1, binh, "binh");

void BM_NondominatedFilter(benchmark::State &state)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> values(static_cast<std::size_t>(state.range(0)));
    for (auto &v : values) {
        v = Vector(2);
        v << u(rng), u(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(nondominated_filter(values));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NondominatedFilter)->Range(1 << 8, 1 << 14)->Complexity();

void BM_GridPareto(benchmark::State &state)
{
    const auto named = get_problem("binh");
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(grid_pareto(named.problem, resolution));
    }
}
BENCHMARK(BM_GridPareto)->Arg(101)->Arg(401);

} // namespace

BENCHMARK_MAIN();
