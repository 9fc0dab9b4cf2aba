#include <benchmark/benchmark.h>

#include "htjack/cumulants.hpp"
#include "htjack/density.hpp"
#include "htjack/rtransform.hpp"
#include "htjack/sampler.hpp"
#include "htjack/shiftedjack.hpp"
#include "htjack/spectra.hpp"

using namespace htjack;

static void moments_by_paths(benchmark::State &state)
{
	const int n = static_cast<int>(state.range(0));
	const auto kv = family_cumulants(ensemble_spec::alpha(1, 1, ratio(1, 2)), n);
	for (auto _ : state)
		benchmark::DoNotOptimize(moments_from_cumulants(kv, n));
}
BENCHMARK(moments_by_paths)->DenseRange(4, 10, 2);

static void cumulants_of_family(benchmark::State &state)
{
	const int n = static_cast<int>(state.range(0));
	const auto spec = ensemble_spec::planch(2, ratio(1, 2));
	for (auto _ : state)
		benchmark::DoNotOptimize(family_cumulants(spec, n));
}
BENCHMARK(cumulants_of_family)->Arg(6)->Arg(12)->Arg(20);

static void qstar(benchmark::State &state)
{
	const int N = static_cast<int>(state.range(0));
	row_qstar_input in;
	in.theta = ratio(1, 3);
	in.k = 6;
	for (int i = 0; i < N; ++i)
		in.x.push_back(ratio(3 * (N - i), 2));
	for (auto _ : state)
		benchmark::DoNotOptimize(qstar_row(in));
}
BENCHMARK(qstar)->Arg(8)->Arg(32)->Arg(128);

static void roots(benchmark::State &state)
{
	const int count = static_cast<int>(state.range(0));
	const auto spec = ensemble_spec::planch(2, 1);
	for (auto _ : state)
		benchmark::DoNotOptimize(find_roots(spec, count));
}
BENCHMARK(roots)->Arg(32)->Arg(128);

static void eigs(benchmark::State &state)
{
	const int size = static_cast<int>(state.range(0));
	const jacobi_operator op(ensemble_spec::alpha(1, 1, ratio(1, 2)));
	for (auto _ : state)
		benchmark::DoNotOptimize(truncated_eigs(op, size, 20));
}
BENCHMARK(eigs)->Arg(100)->Arg(500)->Arg(2000);

static void density(benchmark::State &state)
{
	const auto spec = ensemble_spec::planch(2, 1);
	const auto r = find_roots(spec, 128);
	for (auto _ : state)
		benchmark::DoNotOptimize(build_density(spec, r));
}
BENCHMARK(density);

static void mcmc_steps(benchmark::State &state)
{
	const long sweeps = state.range(0);
	auto config = chain_config::defaults(ensemble_spec::planch(2, 1), 100, sweeps, 7, 1);
	for (auto _ : state)
		benchmark::DoNotOptimize(mcmc_run(config, 1));
	state.SetItemsProcessed(state.iterations() * sweeps);
}
BENCHMARK(mcmc_steps)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
