#include <benchmark/benchmark.h>

#include <bmstrun/capacity.hpp>
#include <bmstrun/check_node.hpp>
#include <bmstrun/constellation.hpp>
#include <bmstrun/rng.hpp>
#include <bmstrun/sim.hpp>

#include <vector>

using namespace bmstrun;

namespace
{

std::vector<double> random_messages(int k, int q, std::uint64_t seed)
{
	Xoshiro256 rng(seed);
	std::vector<double> in(std::size_t(k) * q);
	for (int i = 0; i < k; ++i) {
		double s = 0.0;
		for (int a = 0; a < q; ++a)
			s += in[std::size_t(i) * q + a] = rng.uniform() + 1e-3;
		for (int a = 0; a < q; ++a)
			in[std::size_t(i) * q + a] /= s;
	}
	return in;
}

void check_node(benchmark::State &state, CheckKernel kernel)
{
	const int q = int(state.range(0));
	const int k = int(state.range(1));
	ZeroSumCheck node(q, kernel);
	const auto in = random_messages(k, q, 9);
	std::vector<double> out(in.size());
	for (auto _ : state) {
		node.run(k, in, out);
		benchmark::DoNotOptimize(out.data());
	}
	state.SetItemsProcessed(state.iterations() * k);
}

void BM_CheckDirect(benchmark::State &state) { check_node(state, CheckKernel::direct); }
void BM_CheckTransform(benchmark::State &state) { check_node(state, CheckKernel::transform); }

BENCHMARK(BM_CheckDirect)->ArgsProduct({{2, 4, 8, 16}, {3, 8}});
BENCHMARK(BM_CheckTransform)->ArgsProduct({{2, 4, 8, 16}, {3, 8}});

void capacity(benchmark::State &state, bool serial)
{
	const auto c = builtin("16-QAM");
	CapacityOptions opts;
	opts.max_samples = std::size_t(1) << 15;
	for (auto _ : state) {
		auto est = serial ? iud_capacity_serial(c, 10.0, ChannelKind::awgn, 1e-9, opts)
		                  : iud_capacity(c, 10.0, ChannelKind::awgn, 1e-9, opts);
		benchmark::DoNotOptimize(est.bits);
	}
}

void BM_CapacitySerial(benchmark::State &state) { capacity(state, true); }
void BM_CapacityParallel(benchmark::State &state) { capacity(state, false); }

BENCHMARK(BM_CapacitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CapacityParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

// One coupled BPSK frame, rate 1/2, m = 2, d = 6, L = 20, Q*B = 1000.
void BM_DecodeFrame(benchmark::State &state)
{
	SimConfig cfg;
	cfg.P = 1;
	cfg.Q = 2;
	cfg.B = 500;
	cfg.memory = 2;
	cfg.L = 20;
	cfg.snr_grid = {3.0};
	cfg.stop = {1, 1};
	cfg.frames_per_batch = 1;
	for (auto _ : state) {
		auto r = run_sweep(cfg, 1);
		benchmark::DoNotOptimize(r.rows.data());
	}
}

BENCHMARK(BM_DecodeFrame)->Unit(benchmark::kMillisecond);

}

BENCHMARK_MAIN();
