// bmstrun: command-line front end.
//
//   bmstrun construct --constellation BPSK --P 1 --Q 8 --B 1250 [--gamma-lim -7.2]
//   bmstrun sweep --config run.cfg [--out result.csv] [--workers 4] [--paper-scale]
//   bmstrun bounds --constellation 4-PAM --P 1 --Q 7 [--memory 2] [--table]
//   bmstrun capacity --constellation 8-PSK --rate 4/5 | --snr-start 0 --snr-stop 10
//   bmstrun selftest
//
// Exit status: 0 success, 2 configuration error, 3 runtime failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bmstrun/analysis.hpp"
#include "bmstrun/capacity.hpp"
#include "bmstrun/check_node.hpp"
#include "bmstrun/error.hpp"
#include "bmstrun/parallel.hpp"
#include "bmstrun/sim.hpp"
#include "oracles.hpp"

using namespace bmstrun;

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::vector<double> snr_range(double start, double stop, double step)
{
	if (!(step > 0.0) || stop < start)
		throw ConfigError("SNR range needs start <= stop and step > 0");
	std::vector<double> out;
	const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
	for (int i = 0; i < count; ++i)
		out.push_back(start + i * step);
	return out;
}

Rational parse_rate(const std::string &text)
{
	const auto slash = text.find('/');
	if (slash == std::string::npos)
		throw ConfigError("rate must be written P/Q, got '" + text + "'");
	try
	{
		const int p = std::stoi(text.substr(0, slash));
		const int q = std::stoi(text.substr(slash + 1));
		if (p < 1 || p >= q)
			throw ConfigError("rate must satisfy 0 < P/Q < 1");
		return Rational(p, q);
	}
	catch (const std::logic_error &)
	{
		throw ConfigError("rate must be written P/Q, got '" + text + "'");
	}
}

struct ConstructArgs
{
	std::string constellation = "BPSK";
	std::string channel = "awgn";
	int P = 1, Q = 2, B = 0, L = 20;
	double p_target = 1e-5;
	std::optional<double> gamma_lim;
	std::optional<int> delay;
	std::uint64_t seed = 1;
};

int cmd_construct(const ConstructArgs &a)
{
	const auto c = resolve_constellation(a.constellation);
	ConstructOptions opts;
	opts.gamma_lim_db = a.gamma_lim;
	opts.interleaver_seed = a.seed;
	opts.L = a.L;
	opts.delay = a.delay;
	const int B = a.B > 0 ? a.B : (1000 + a.Q - 1) / a.Q;
	const auto result = construct_code(c, a.P, a.Q, B, a.p_target, parse_channel_kind(a.channel), opts);
	std::cout << format_report(result.report) << "\n";
	std::cout << "effective_rate=" << effective_rate(result.spec) << " L=" << result.spec.L << " d=" << result.spec.d
	          << " interleaver_seed=" << result.spec.interleaver_seed << "\n";
	return 0;
}

struct SweepArgs
{
	std::string config;
	std::string out;
	int workers = 0;
	bool paper_scale = false;
	std::string dump_frame;
	std::string trace;
	bool quiet = false;
};

int cmd_sweep(const SweepArgs &a)
{
	SimConfig cfg = load_config(a.config);
	if (a.paper_scale)
		apply_paper_scale(cfg);
	const std::string out = !a.out.empty() ? a.out : cfg.output;

	std::ofstream dump, trace;
	SweepHooks hooks;
	if (!a.dump_frame.empty())
	{
		dump.open(a.dump_frame);
		if (!dump)
			throw RuntimeFailure("cannot write " + a.dump_frame);
		hooks.frame_dump = [&](const std::vector<GroupVector> &u, const EncodedFrame &f) { write_frame_dump(dump, u, f); };
	}
	if (!a.trace.empty())
	{
		trace.open(a.trace);
		if (!trace)
			throw RuntimeFailure("cannot write " + a.trace);
		trace << "target,iteration,max_change,layer,entropy_bits\n";
		hooks.trace = [&](const TraceEvent &ev) {
			for (std::size_t i = 0; i < ev.layer_times.size(); ++i)
				trace << ev.target << "," << ev.iteration << "," << ev.max_change << "," << ev.layer_times[i] << ","
				      << ev.layer_entropy[i] << "\n";
		};
	}
	if (!a.quiet)
		hooks.progress = [](const SimRow &r) {
			std::fprintf(stderr, "snr %7.3f dB  frames %8lld  errors %8lld  ser %.4e  (%.1f s)\n", r.snr_db,
			             static_cast<long long>(r.frames), static_cast<long long>(r.symbol_errors), r.ser,
			             r.wall_seconds);
		};

	const auto result = run_sweep(cfg, a.workers, hooks);
	if (out.empty() || out == "-")
		emit_csv(result, std::cout);
	else
		emit_csv(result, std::filesystem::path(out));
	return 0;
}

struct BoundsArgs
{
	std::string constellation = "BPSK";
	int P = 1, Q = 1;
	std::optional<int> memory;
	double start = -5, stop = 15, step = 0.5;
	bool table = false;
	double p_target = 1e-5;
	double tol_db = 0.05;
};

int cmd_bounds(const BoundsArgs &a)
{
	const auto c = resolve_constellation(a.constellation);
	if (a.table)
	{
		std::cout << "rate,N,alpha,gamma_lim_db,m\n";
		for (int P = 1; P < a.Q; ++P)
		{
			const auto [N, alpha] = time_sharing_params(P, a.Q);
			const double lim = shannon_limit({c, Rational(P, a.Q), ChannelKind::awgn}, a.tol_db);
			const int m = select_memory(c, N, alpha, lim, a.p_target);
			std::printf("%d/%d,%d,%s,%.2f,%d\n", P, a.Q, N, alpha.str().c_str(), lim, m);
		}
		return 0;
	}
	const auto [N, alpha] = time_sharing_params(a.P, a.Q);
	std::cout << "snr_db,bound_value\n";
	for (double s : snr_range(a.start, a.stop, a.step))
	{
		const double v = a.memory ? genie_bound(c, N, alpha, *a.memory, s) : run_ser_bound(c, N, alpha, s);
		std::printf("%.17g,%.17g\n", s, v);
	}
	return 0;
}

struct CapacityArgs
{
	std::string constellation = "BPSK";
	std::string channel = "awgn";
	std::string rate;
	std::optional<double> start, stop;
	double step = 0.5;
	double precision = 1e-3;
	double tol_db = 0.05;
	std::uint64_t seed = 0x5EEDCAFEull;
	int workers = 0;
};

int cmd_capacity(const CapacityArgs &a)
{
	const auto c = resolve_constellation(a.constellation);
	const auto kind = parse_channel_kind(a.channel);
	ShannonLimitOptions opts;
	opts.capacity.seed = a.seed;
	opts.capacity.workers = a.workers;
	if (!a.rate.empty())
	{
		const double lim = shannon_limit({c, parse_rate(a.rate), kind}, a.tol_db, opts);
		std::printf("%s %s rate %s: gamma_lim = %.3f dB\n", c.name().c_str(), to_string(kind).c_str(),
		            a.rate.c_str(), lim);
		return 0;
	}
	if (!a.start || !a.stop)
		throw ConfigError("capacity: give --rate, or --snr-start and --snr-stop");
	std::cout << "snr_db,capacity_bits\n";
	for (double s : snr_range(*a.start, *a.stop, a.step))
		std::printf("%.17g,%.17g\n", s, iud_capacity(c, s, kind, a.precision, opts.capacity).bits);
	return 0;
}

// Small versions of the oracle suites, runnable on an installed binary.
int cmd_selftest()
{
	int failed = 0;
	auto report = [&](bool ok, const char *what) {
		std::printf("%s %s\n", ok ? "PASS" : "FAIL", what);
		failed += !ok;
	};

	auto rng = substream(1, Stream::test);
	double worst = 0.0;
	for (int q = 2; q <= 8; ++q)
		for (int N = 1; N <= 5; ++N)
			for (int rep = 0; rep < 20; ++rep)
			{
				MessageBlock priors(N, q);
				for (std::size_t j = 0; j < priors.size(); ++j)
				{
					for (auto &x : priors[j])
						x = rng.uniform() + 1e-3;
					normalize(priors[j]);
				}
				const auto got = siso_decode(RunSpec::make(1, N), priors);
				const auto ref = oracle::repetition_marginals(priors, q, N);
				for (int j = 0; j < N; ++j)
					for (int k = 0; k < q; ++k)
						worst = std::max(worst, std::abs(got.extrinsic[j][k] / ref.extrinsic[j][k] - 1.0));
			}
	report(worst <= 1e-12, "SISO repetition decoding matches brute-force marginalization");

	double diff = 0.0;
	for (int rep = 0; rep < 200; ++rep)
	{
		const int q = 2 + static_cast<int>(rng.below(15));
		const int k = 2 + static_cast<int>(rng.below(4));
		std::vector<ProbMessage> in(k, ProbMessage(q));
		for (auto &m : in)
		{
			for (auto &x : m)
				x = rng.uniform() + 1e-6;
			normalize(m);
		}
		const auto d = node_add(in, q, CheckKernel::direct);
		const auto t = node_add(in, q, CheckKernel::transform);
		for (int i = 0; i < k; ++i)
			for (int a = 0; a < q; ++a)
				diff = std::max(diff, std::abs(d[i][a] - t[i][a]));
	}
	report(diff <= 1e-12, "check node: direct and transform kernels agree");

	bool edef_ok = true;
	for (const char *name : {"BPSK", "3-PAM", "4-PAM"})
		for (int N = 1; N <= 3; ++N)
		{
			const auto c = builtin(name);
			const auto got = edef_power(c, N);
			for (const auto &[key, mult] : oracle::edef_enumerate(c, N))
				edef_ok &= std::abs(got.coefficient(static_cast<double>(key) * 1e-6) - mult) <= 1e-12;
		}
	report(edef_ok, "distance enumerators match exhaustive enumeration");

	bool bpsk_ok = true;
	const auto bpsk = builtin("BPSK");
	for (int N = 1; N <= 16; ++N)
		for (double s = -5; s <= 10; s += 2.5)
		{
			const double ref = oracle::gaussian_tail(std::sqrt(N * db_to_linear(s)));
			bpsk_ok &= std::abs(union_bound_rep(bpsk, N, s) / ref - 1.0) <= 1e-12;
		}
	report(bpsk_ok, "BPSK union bound equals Q(sqrt(N snr))");

	return failed ? kExitRuntime : 0;
}

}

int main(int argc, char **argv)
{
	CLI::App app{"BMST over RUN codes: construction, bounds, capacity and Monte Carlo sweeps"};
	app.require_subcommand(1);

	ConstructArgs ca;
	auto *construct = app.add_subcommand("construct", "Pick (N, alpha, m) for a rate and print the construction report");
	construct->add_option("--constellation", ca.constellation, "builtin name or constellation file");
	construct->add_option("--P", ca.P, "information symbols per RUN codeword")->required();
	construct->add_option("--Q", ca.Q, "coded symbols per RUN codeword")->required();
	construct->add_option("--B", ca.B, "Cartesian-product fold (default: smallest with Q*B >= 1000)");
	construct->add_option("--p-target", ca.p_target, "target SER at the Shannon limit");
	construct->add_option("--gamma-lim", ca.gamma_lim, "use this Shannon limit (dB) instead of computing it");
	construct->add_option("--channel", ca.channel, "awgn or rayleigh");
	construct->add_option("--L", ca.L, "data blocks per frame");
	construct->add_option("--delay", ca.delay, "decoding delay (default 3m)");
	construct->add_option("--seed", ca.seed, "interleaver seed");

	SweepArgs sa;
	auto *sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep described by a config file");
	sweep->add_option("--config", sa.config, "config file")->required()->check(CLI::ExistingFile);
	sweep->add_option("--out", sa.out, "CSV output path ('-' for stdout; default: config 'output' key)");
	sweep->add_option("--workers", sa.workers, "worker threads (default: BMSTRUN_WORKERS or all cores)");
	sweep->add_flag("--paper-scale", sa.paper_scale, "L = 1000 and B = paper_B from the config");
	sweep->add_option("--dump-frame", sa.dump_frame, "write u/v/c of the first frame as CSV");
	sweep->add_option("--trace", sa.trace, "write per-iteration decoder entropies of the first frame as CSV");
	sweep->add_flag("--quiet", sa.quiet, "no progress lines on stderr");

	BoundsArgs ba;
	auto *bounds = app.add_subcommand("bounds", "Union or genie-aided bound curves as CSV, or the memory table");
	bounds->add_option("--constellation", ba.constellation, "builtin name or constellation file");
	bounds->add_option("--P", ba.P);
	bounds->add_option("--Q", ba.Q);
	bounds->add_option("--memory", ba.memory, "genie-aided bound for this encoding memory");
	bounds->add_option("--snr-start", ba.start);
	bounds->add_option("--snr-stop", ba.stop);
	bounds->add_option("--snr-step", ba.step);
	bounds->add_flag("--table", ba.table, "print rate,N,alpha,gamma_lim_db,m for rates 1/Q .. (Q-1)/Q");
	bounds->add_option("--p-target", ba.p_target, "target SER used by --table");
	bounds->add_option("--tol", ba.tol_db, "Shannon-limit tolerance (dB) used by --table");

	CapacityArgs ka;
	auto *capacity = app.add_subcommand("capacity", "Shannon limit for a rate, or a capacity curve as CSV");
	capacity->add_option("--constellation", ka.constellation, "builtin name or constellation file");
	capacity->add_option("--channel", ka.channel, "awgn or rayleigh");
	capacity->add_option("--rate", ka.rate, "symbols per channel use, written P/Q");
	capacity->add_option("--snr-start", ka.start);
	capacity->add_option("--snr-stop", ka.stop);
	capacity->add_option("--snr-step", ka.step);
	capacity->add_option("--precision", ka.precision, "Monte Carlo standard error target (bits)");
	capacity->add_option("--tol", ka.tol_db, "Shannon-limit tolerance (dB)");
	capacity->add_option("--seed", ka.seed);
	capacity->add_option("--workers", ka.workers);

	app.add_subcommand("selftest", "Run quick oracle checks");

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError &e)
	{
		const int code = app.exit(e);
		return code == 0 ? 0 : kExitConfig;
	}

	try
	{
		if (*construct)
			return cmd_construct(ca);
		if (*sweep)
			return cmd_sweep(sa);
		if (*bounds)
			return cmd_bounds(ba);
		if (*capacity)
			return cmd_capacity(ka);
		return cmd_selftest();
	}
	catch (const ConfigError &e)
	{
		std::fprintf(stderr, "configuration error: %s\n", e.what());
		return kExitConfig;
	}
	catch (const std::invalid_argument &e)
	{
		std::fprintf(stderr, "configuration error: %s\n", e.what());
		return kExitConfig;
	}
	catch (const std::exception &e)
	{
		std::fprintf(stderr, "error: %s\n", e.what());
		return kExitRuntime;
	}
}
