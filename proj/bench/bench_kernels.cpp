// Parallel kernels against their serial references. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "critspace/critical.hpp"
#include "critspace/exactla.hpp"
#include "critspace/sweep.hpp"
#include "critspace/zsolver.hpp"

using namespace critspace;

namespace {

FpMatrix random_square(std::size_t n, std::uint64_t seed)
{
    PrimeField f;
    FpMatrix m(n, n, f);
    const auto e = random_entries(n * n, seed, EntryDistribution::field(f.prime()));
    for (std::size_t i = 0; i < n * n; ++i)
        m(i / n, i % n) = static_cast<std::uint32_t>(e[i]);
    return m;
}

IntTensor random_int(const Format& f, std::uint64_t seed)
{
    return IntTensor(f, random_tensor(f, seed, EntryDistribution::field(kDefaultPrime)));
}

const Format kAlphaFormats[] = {Format({3, 4, 7}), Format({4, 5, 9}), Format({2, 2, 3, 6})};

void BM_rank(benchmark::State& state)
{
    const auto m = random_square(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(rank(m));
}

void BM_rank_reference(benchmark::State& state)
{
    const auto m = random_square(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(rank_reference(m));
}

void BM_critical_dim(benchmark::State& state)
{
    const auto t = random_int(Format({2, static_cast<int>(state.range(0))}), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(critical_dim(t, PrimeField()));
}

void BM_critical_dim_reference(benchmark::State& state)
{
    const auto t = random_int(Format({2, static_cast<int>(state.range(0))}), 1);
    for (auto _ : state) {
        const auto m = critical_equations(t, PrimeField());
        benchmark::DoNotOptimize(m.cols() - rank_reference(m));
    }
}

void BM_alpha_matrix(benchmark::State& state)
{
    const auto t = random_int(kAlphaFormats[state.range(0)], 1);
    state.SetLabel(t.format().to_string());
    for (auto _ : state)
        benchmark::DoNotOptimize(alpha_matrix(t, PrimeField()));
}

void BM_alpha_matrix_reference(benchmark::State& state)
{
    const auto t = random_int(kAlphaFormats[state.range(0)], 1);
    state.SetLabel(t.format().to_string());
    for (auto _ : state)
        benchmark::DoNotOptimize(alpha_matrix_reference(t, PrimeField()));
}

void solve(benchmark::State& state, bool parallel)
{
    const Format f = state.range(0) == 0 ? Format({2, 2, 4}) : Format({3, 3, 3});
    const auto t = random_real_tensor(f, 1);
    SolverOptions opt;
    opt.parallel = parallel;
    state.SetLabel(f.to_string());
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_singular_tuples(t, opt).tuples.size());
}

void BM_solve_parallel(benchmark::State& state) { solve(state, true); }
void BM_solve_serial(benchmark::State& state) { solve(state, false); }

void sweep_bench(benchmark::State& state, bool parallel)
{
    SweepOptions opt;
    opt.k = 2;
    opt.max_n = 4;
    opt.parallel = parallel;
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep(opt).size());
}

void BM_sweep_parallel(benchmark::State& state) { sweep_bench(state, true); }
void BM_sweep_serial(benchmark::State& state) { sweep_bench(state, false); }

}  // namespace

BENCHMARK(BM_rank)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank_reference)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_critical_dim)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_critical_dim_reference)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_alpha_matrix)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_alpha_matrix_reference)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_parallel)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_serial)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
