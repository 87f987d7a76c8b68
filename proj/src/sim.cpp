#include "bmstrun/sim.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bmstrun/analysis.hpp"
#include "bmstrun/capacity.hpp"
#include "bmstrun/error.hpp"
#include "bmstrun/parallel.hpp"
#include "bmstrun/rng.hpp"

#ifndef BMSTRUN_GIT_REVISION
#define BMSTRUN_GIT_REVISION "unknown"
#endif

namespace bmstrun
{

std::string git_revision()
{
	return BMSTRUN_GIT_REVISION;
}

std::string fnv1a_hex(const std::string &text)
{
	std::uint64_t h = 0xcbf29ce484222325ull;
	for (unsigned char ch : text)
	{
		h ^= ch;
		h *= 0x100000001b3ull;
	}
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

// ---------------------------------------------------------------------------
// config

namespace
{

std::string trim(const std::string &s)
{
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string::npos)
		return {};
	const auto e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(const std::string &key, const std::string &value)
{
	T out{};
	const auto *end = value.data() + value.size();
	auto [ptr, ec] = std::from_chars(value.data(), end, out);
	if (ec != std::errc() || ptr != end)
		throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
	return out;
}

double parse_double(const std::string &key, const std::string &value)
{
	double out = 0.0;
	const auto *end = value.data() + value.size();
	auto [ptr, ec] = std::from_chars(value.data(), end, out);
	if (ec != std::errc() || ptr != end || !std::isfinite(out))
		throw ConfigError("config key '" + key + "': not a finite number: '" + value + "'");
	return out;
}

bool parse_bool(const std::string &key, const std::string &value)
{
	if (value == "true" || value == "1" || value == "yes")
		return true;
	if (value == "false" || value == "0" || value == "no")
		return false;
	throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string &value)
{
	std::vector<std::string> items;
	std::string item;
	std::istringstream ss(value);
	while (std::getline(ss, item, ','))
	{
		item = trim(item);
		if (!item.empty())
			items.push_back(item);
	}
	return items;
}

std::string format_double(double x)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

}

SimConfig parse_config(std::istream &in)
{
	SimConfig cfg;
	std::optional<double> start, stop, step;
	bool have_list = false;
	std::string line;
	int lineno = 0;
	while (std::getline(in, line))
	{
		++lineno;
		if (auto hash = line.find('#'); hash != std::string::npos)
			line.erase(hash);
		line = trim(line);
		if (line.empty())
			continue;
		const auto eq = line.find('=');
		if (eq == std::string::npos)
			throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
		const std::string key = trim(line.substr(0, eq));
		const std::string value = trim(line.substr(eq + 1));

		if (key == "schema")
			cfg.schema = parse_integer<int>(key, value);
		else if (key == "constellation")
			cfg.constellation = value;
		else if (key == "channel")
			cfg.channel = parse_channel_kind(value);
		else if (key == "P")
			cfg.P = parse_integer<int>(key, value);
		else if (key == "Q")
			cfg.Q = parse_integer<int>(key, value);
		else if (key == "B")
			cfg.B = parse_integer<int>(key, value);
		else if (key == "memory")
			cfg.memory = parse_integer<int>(key, value);
		else if (key == "L")
			cfg.L = parse_integer<int>(key, value);
		else if (key == "delay")
			cfg.delay = parse_integer<int>(key, value);
		else if (key == "max_iters")
			cfg.max_iters = parse_integer<int>(key, value);
		else if (key == "trailing")
		{
			if (value == "decision_feedback")
				cfg.trailing = TrailingEdge::decision_feedback;
			else if (value == "freeze_messages")
				cfg.trailing = TrailingEdge::freeze_messages;
			else
				throw ConfigError("config key 'trailing': expected decision_feedback or freeze_messages");
		}
		else if (key == "check_kernel")
		{
			if (value == "direct")
				cfg.kernel = CheckKernel::direct;
			else if (value == "transform")
				cfg.kernel = CheckKernel::transform;
			else
				throw ConfigError("config key 'check_kernel': expected direct or transform");
		}
		else if (key == "snr")
		{
			have_list = true;
			for (const auto &item : split_list(value))
				cfg.snr_grid.push_back(parse_double(key, item));
		}
		else if (key == "snr_start")
			start = parse_double(key, value);
		else if (key == "snr_stop")
			stop = parse_double(key, value);
		else if (key == "snr_step")
			step = parse_double(key, value);
		else if (key == "min_symbol_errors")
			cfg.stop.min_symbol_errors = parse_integer<std::int64_t>(key, value);
		else if (key == "max_frames")
			cfg.stop.max_frames = parse_integer<std::int64_t>(key, value);
		else if (key == "seed")
			cfg.seed = parse_integer<std::uint64_t>(key, value);
		else if (key == "interleaver_seed")
			cfg.interleaver_seed = parse_integer<std::uint64_t>(key, value);
		else if (key == "sigma_override")
			cfg.sigma_override = parse_double(key, value);
		else if (key == "dither")
			cfg.dither = parse_bool(key, value);
		else if (key == "frames_per_batch")
			cfg.frames_per_batch = parse_integer<int>(key, value);
		else if (key == "paper_B")
			cfg.paper_B = parse_integer<int>(key, value);
		else if (key == "output")
			cfg.output = value;
		else if (key == "metrics")
		{
			cfg.metrics = split_list(value);
			for (const auto &m : cfg.metrics)
				if (m != "SER" && m != "BER")
					throw ConfigError("config key 'metrics': unknown metric " + m);
		}
		else
			throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
	}

	if (start || stop || step)
	{
		if (have_list)
			throw ConfigError("config: give either 'snr' or snr_start/snr_stop/snr_step, not both");
		if (!start || !stop || !step || !(*step > 0.0))
			throw ConfigError("config: snr_start, snr_stop and a positive snr_step are all required");
		const auto count = static_cast<int>(std::floor((*stop - *start) / *step + 1e-9)) + 1;
		for (int i = 0; i < count; ++i)
			cfg.snr_grid.push_back(*start + i * *step);
	}
	validate(cfg);
	return cfg;
}

SimConfig load_config(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("cannot open config file " + path.string());
	return parse_config(in);
}

void validate(const SimConfig &cfg)
{
	if (cfg.schema != kConfigSchemaVersion)
		throw ConfigError("config schema " + std::to_string(cfg.schema) + " is not supported (expected " +
		                  std::to_string(kConfigSchemaVersion) + ")");
	if (cfg.snr_grid.empty())
		throw ConfigError("config: SNR grid is empty");
	for (std::size_t i = 1; i < cfg.snr_grid.size(); ++i)
		if (!(cfg.snr_grid[i] > cfg.snr_grid[i - 1]))
			throw ConfigError("config: SNR grid must be strictly increasing");
	if (cfg.stop.min_symbol_errors < 1)
		throw ConfigError("config: min_symbol_errors must be at least 1");
	if (cfg.stop.max_frames < 1)
		throw ConfigError("config: max_frames must be at least 1");
	if (cfg.P < 1 || cfg.P > cfg.Q)
		throw ConfigError("config: need 1 <= P <= Q");
	if (cfg.B < 0)
		throw ConfigError("config: B must be nonnegative");
	if (cfg.memory && *cfg.memory < 0)
		throw ConfigError("config: memory must be nonnegative");
	if (cfg.delay && *cfg.delay < 0)
		throw ConfigError("config: delay must be nonnegative");
	if (cfg.L < 1 || cfg.max_iters < 1 || cfg.frames_per_batch < 1)
		throw ConfigError("config: L, max_iters and frames_per_batch must be positive");
	if (cfg.sigma_override && !(*cfg.sigma_override > 0.0))
		throw ConfigError("config: sigma_override must be positive");
}

std::string canonical(const SimConfig &cfg)
{
	std::ostringstream os;
	os << "schema=" << cfg.schema << "\nconstellation=" << cfg.constellation << "\nchannel=" << to_string(cfg.channel)
	   << "\nP=" << cfg.P << "\nQ=" << cfg.Q << "\nB=" << resolved_B(cfg)
	   << "\nmemory=" << (cfg.memory ? std::to_string(*cfg.memory) : "none") << "\nL=" << cfg.L
	   << "\ndelay=" << resolved_delay(cfg) << "\nmax_iters=" << cfg.max_iters
	   << "\ntrailing=" << (cfg.trailing == TrailingEdge::decision_feedback ? "decision_feedback" : "freeze_messages")
	   << "\ncheck_kernel=" << (cfg.kernel == CheckKernel::direct ? "direct" : "transform") << "\nsnr=";
	for (std::size_t i = 0; i < cfg.snr_grid.size(); ++i)
		os << (i ? "," : "") << format_double(cfg.snr_grid[i]);
	os << "\nmin_symbol_errors=" << cfg.stop.min_symbol_errors << "\nmax_frames=" << cfg.stop.max_frames
	   << "\nseed=" << cfg.seed << "\ninterleaver_seed=" << cfg.interleaver_seed.value_or(cfg.seed)
	   << "\nsigma_override=" << (cfg.sigma_override ? format_double(*cfg.sigma_override) : "none")
	   << "\ndither=" << (cfg.dither ? "true" : "false") << "\nframes_per_batch=" << cfg.frames_per_batch << "\n";
	return os.str();
}

void apply_paper_scale(SimConfig &cfg)
{
	cfg.L = 1000;
	if (cfg.paper_B > 0)
		cfg.B = cfg.paper_B;
}

int resolved_B(const SimConfig &cfg)
{
	return cfg.B > 0 ? cfg.B : (1000 + cfg.Q - 1) / cfg.Q;
}

int resolved_delay(const SimConfig &cfg)
{
	return cfg.delay.value_or(3 * cfg.memory.value_or(0));
}

// ---------------------------------------------------------------------------
// sweep

namespace
{

struct FrameCounts
{
	std::int64_t symbols = 0;
	std::int64_t symbol_errors = 0;
	std::int64_t bit_errors = 0;
};

GroupVector random_vector(int q, std::size_t n, Xoshiro256 &rng)
{
	GroupVector v(q, n);
	for (std::size_t j = 0; j < n; ++j)
		v[j] = static_cast<Symbol>(rng.below(q));
	return v;
}

void count_errors(const GroupVector &sent, const GroupVector &got, FrameCounts &fc)
{
	fc.symbols += static_cast<std::int64_t>(sent.size());
	for (std::size_t j = 0; j < sent.size(); ++j)
		if (sent[j] != got[j])
		{
			++fc.symbol_errors;
			fc.bit_errors += std::popcount(static_cast<std::uint32_t>(sent[j] ^ got[j]));
		}
}

class FrameSimulator
{
public:
	FrameSimulator(const SimConfig &cfg, const LabeledConstellation &c)
		: cfg_(cfg), c_(c), basic_(RunSpec::make(cfg.P, cfg.Q, resolved_B(cfg)))
	{
		if (cfg.memory)
		{
			spec_.basic = basic_;
			spec_.m = *cfg.memory;
			spec_.interleaver_seed = cfg.interleaver_seed.value_or(cfg.seed);
			spec_.L = cfg.L;
			spec_.d = resolved_delay(cfg);
			spec_.max_iters = cfg.max_iters;
			spec_.trailing = cfg.trailing;
			spec_.kernel = cfg.kernel;
			interleavers_ = make_interleavers(spec_.interleaver_seed, spec_.m, spec_.block_length());
		}
	}

	bool coupled() const { return cfg_.memory.has_value(); }

	SlidingWindowDecoder make_decoder() const { return {spec_, c_, interleavers_}; }

	ChannelRealization transmit(const GroupVector &x, double sigma, Xoshiro256 &noise, Xoshiro256 &fading) const
	{
		return cfg_.channel == ChannelKind::awgn ? transmit_awgn(c_, x, sigma, noise)
		                                         : transmit_rayleigh(c_, x, sigma, noise, fading);
	}

	GroupVector draw_dither(std::size_t n, Xoshiro256 &rng) const
	{
		return cfg_.dither ? random_vector(c_.q(), n, rng) : GroupVector(c_.q(), n);
	}

	FrameCounts run(std::size_t snr_index, std::uint64_t frame, double sigma, SlidingWindowDecoder *decoder,
	                const SweepHooks *hooks) const
	{
		auto data = substream(cfg_.seed, Stream::data, snr_index, frame);
		auto dither = substream(cfg_.seed, Stream::dither, snr_index, frame);
		auto noise = substream(cfg_.seed, Stream::noise, snr_index, frame);
		auto fading = substream(cfg_.seed, Stream::fading, snr_index, frame);
		const int q = c_.q();
		FrameCounts fc;

		if (!coupled())
		{
			const GroupVector u = random_vector(q, basic_.info_length(), data);
			const GroupVector v = run_encode(basic_, u);
			const GroupVector w = draw_dither(v.size(), dither);
			const auto rx = transmit(apply_dither(v, w), sigma, noise, fading);
			const auto out = siso_decode(basic_, channel_evidence(c_, rx, w));
			GroupVector u_hat(q, u.size());
			for (std::size_t i = 0; i < u.size(); ++i)
				u_hat[i] = hard_decision(out.app[i]);
			count_errors(u, u_hat, fc);
			return fc;
		}

		std::vector<GroupVector> u;
		for (int t = 0; t < spec_.L; ++t)
			u.push_back(random_vector(q, basic_.info_length(), data));
		const EncodedFrame enc = bmst_encode_frame(spec_, interleavers_, u);
		if (hooks && hooks->frame_dump)
			hooks->frame_dump(u, enc);

		std::vector<ChannelRealization> rx;
		std::vector<GroupVector> w;
		for (const auto &c : enc.c)
		{
			w.push_back(draw_dither(c.size(), dither));
			rx.push_back(transmit(apply_dither(c, w.back()), sigma, noise, fading));
		}
		if (hooks && hooks->trace)
			decoder->set_trace(hooks->trace);
		const auto u_hat = decoder->decode(rx, w);
		if (hooks && hooks->trace)
			decoder->set_trace({});
		for (int t = 0; t < spec_.L; ++t)
			count_errors(u[t], u_hat[t], fc);
		return fc;
	}

	std::string describe() const
	{
		std::ostringstream os;
		os << "RUN[" << cfg_.Q << "," << cfg_.P << "]^" << basic_.B << " N=" << basic_.N << " alpha=" << basic_.alpha;
		if (coupled())
			os << " BMST m=" << spec_.m << " L=" << spec_.L << " d=" << spec_.d << " max_iters=" << spec_.max_iters;
		else
			os << " uncoupled";
		return os.str();
	}

private:
	const SimConfig &cfg_;
	const LabeledConstellation &c_;
	RunSpec basic_;
	BmstSpec spec_;
	std::vector<Permutation> interleavers_;
};

}

const std::vector<std::string> &csv_columns()
{
	static const std::vector<std::string> cols{"snr_db", "frames",     "symbols", "symbol_errors", "ser",
	                                           "ser_stderr", "bit_errors", "ber",     "wall_seconds"};
	return cols;
}

SimResult run_sweep(const SimConfig &cfg, int workers, const SweepHooks &hooks)
{
	validate(cfg);
	if (workers <= 0)
		workers = default_workers();
	const LabeledConstellation c = resolve_constellation(cfg.constellation);
	const FrameSimulator sim(cfg, c);
	const int bits_per_symbol = static_cast<int>(std::ceil(std::log2(static_cast<double>(c.q()))));

	SimResult result;
	result.metadata = {
		{"config_hash", fnv1a_hex(canonical(cfg))},
		{"git_revision", git_revision()},
		{"seed", std::to_string(cfg.seed)},
		{"constellation", c.name()},
		{"channel", to_string(cfg.channel)},
		{"code", sim.describe()},
		{"bits_per_symbol", std::to_string(bits_per_symbol)},
		{"ser_denominator", "information symbols of the data blocks; termination blocks excluded"},
	};

	std::vector<SlidingWindowDecoder> decoders;
	if (sim.coupled())
		for (int w = 0; w < workers; ++w)
			decoders.push_back(sim.make_decoder());

	const auto batch_size = static_cast<std::size_t>(cfg.frames_per_batch);
	std::vector<FrameCounts> batch(batch_size);
	for (std::size_t s = 0; s < cfg.snr_grid.size(); ++s)
	{
		const auto t0 = std::chrono::steady_clock::now();
		const double snr = cfg.snr_grid[s];
		const double sigma = cfg.sigma_override.value_or(sigma_from_snr(c, snr).sigma);
		SimRow row;
		row.snr_db = snr;
		while (true)
		{
			const auto remaining = static_cast<std::size_t>(cfg.stop.max_frames - row.frames);
			const std::size_t count = std::min(batch_size, remaining);
			const auto first = static_cast<std::uint64_t>(row.frames);
			parallel_for_worker(count, workers, [&](std::size_t i, int worker) {
				const bool hooked = s == 0 && first + i == 0;
				batch[i] = sim.run(s, first + i, sigma, sim.coupled() ? &decoders[worker] : nullptr,
				                   hooked ? &hooks : nullptr);
			});
			for (std::size_t i = 0; i < count; ++i)
			{
				row.symbols += batch[i].symbols;
				row.symbol_errors += batch[i].symbol_errors;
				row.bit_errors += batch[i].bit_errors;
			}
			row.frames += static_cast<std::int64_t>(count);
			if (row.symbol_errors >= cfg.stop.min_symbol_errors || row.frames >= cfg.stop.max_frames)
				break;
		}
		row.ser = static_cast<double>(row.symbol_errors) / static_cast<double>(row.symbols);
		row.ser_stderr = std::sqrt(row.ser * (1.0 - row.ser) / static_cast<double>(row.symbols));
		row.ber = static_cast<double>(row.bit_errors) / (static_cast<double>(row.symbols) * bits_per_symbol);
		row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		result.rows.push_back(row);
		if (hooks.progress)
			hooks.progress(row);
	}
	return result;
}

// ---------------------------------------------------------------------------
// CSV

void emit_csv(const SimResult &result, std::ostream &out)
{
	for (const auto &[k, v] : result.metadata)
		out << "# " << k << ": " << v << "\n";
	const auto &cols = csv_columns();
	for (std::size_t i = 0; i < cols.size(); ++i)
		out << (i ? "," : "") << cols[i];
	out << "\n";
	for (const auto &r : result.rows)
		out << format_double(r.snr_db) << "," << r.frames << "," << r.symbols << "," << r.symbol_errors << ","
		    << format_double(r.ser) << "," << format_double(r.ser_stderr) << "," << r.bit_errors << ","
		    << format_double(r.ber) << "," << format_double(r.wall_seconds) << "\n";
}

void emit_csv(const SimResult &result, const std::filesystem::path &path)
{
	std::ofstream out(path);
	if (!out)
		throw RuntimeFailure("cannot write " + path.string());
	emit_csv(result, out);
	if (!out)
		throw RuntimeFailure("write failed: " + path.string());
}

SimResult parse_csv(std::istream &in)
{
	SimResult result;
	std::string line;
	bool header = false;
	while (std::getline(in, line))
	{
		if (!line.empty() && line.back() == '\r')
			line.pop_back();
		if (line.empty())
			continue;
		if (line[0] == '#')
		{
			const auto colon = line.find(':');
			if (colon == std::string::npos)
				throw ConfigError("CSV: malformed metadata line: " + line);
			result.metadata.emplace_back(trim(line.substr(1, colon - 1)), trim(line.substr(colon + 1)));
			continue;
		}
		std::vector<std::string> fields;
		std::string f;
		std::istringstream ss(line);
		while (std::getline(ss, f, ','))
			fields.push_back(f);
		if (!header)
		{
			if (fields != csv_columns())
				throw ConfigError("CSV: unexpected header: " + line);
			header = true;
			continue;
		}
		if (fields.size() != csv_columns().size())
			throw ConfigError("CSV: wrong field count: " + line);
		SimRow r;
		r.snr_db = parse_double("snr_db", fields[0]);
		r.frames = parse_integer<std::int64_t>("frames", fields[1]);
		r.symbols = parse_integer<std::int64_t>("symbols", fields[2]);
		r.symbol_errors = parse_integer<std::int64_t>("symbol_errors", fields[3]);
		r.ser = parse_double("ser", fields[4]);
		r.ser_stderr = parse_double("ser_stderr", fields[5]);
		r.bit_errors = parse_integer<std::int64_t>("bit_errors", fields[6]);
		r.ber = parse_double("ber", fields[7]);
		r.wall_seconds = parse_double("wall_seconds", fields[8]);
		result.rows.push_back(r);
	}
	if (!header)
		throw ConfigError("CSV: missing header row");
	return result;
}

void write_frame_dump(std::ostream &out, const std::vector<GroupVector> &u, const EncodedFrame &frame)
{
	auto join = [](std::span<const Symbol> s) {
		std::string text;
		for (std::size_t i = 0; i < s.size(); ++i)
		{
			if (i)
				text += ' ';
			text += std::to_string(s[i]);
		}
		return text;
	};
	out << "t,u,v,c\n";
	for (std::size_t t = 0; t < frame.c.size(); ++t)
		out << t << "," << (t < u.size() ? join(u[t].symbols()) : std::string()) << "," << join(frame.v[t].symbols())
		    << "," << join(frame.c[t].symbols()) << "\n";
}

// ---------------------------------------------------------------------------
// construction

Construction construct_code(const LabeledConstellation &c, int P, int Q, int B, double p_target, ChannelKind channel,
                            const ConstructOptions &opts)
{
	if (!(p_target > 0.0 && p_target < 1.0))
		throw ConfigError("construct: p_target must lie in (0, 1)");
	Construction out;
	ConstructionReport &r = out.report;
	const RunSpec basic = RunSpec::make(P, Q, B);
	r.constellation = c.name();
	r.P = P;
	r.Q = Q;
	r.N = basic.N;
	r.alpha = basic.alpha;
	r.B = B;
	r.p_target = p_target;
	r.channel = channel;
	if (static_cast<long long>(Q) * B < 1000)
		r.warnings.push_back("Q*B = " + std::to_string(static_cast<long long>(Q) * B) +
		                     " is below 1000; error propagation in the window decoder is likely");

	if (opts.gamma_lim_db)
	{
		r.gamma_lim_db = *opts.gamma_lim_db;
		r.gamma_lim_supplied = true;
	}
	else
	{
		if (P == Q)
			throw ConfigError("construct: rate 1 has no finite Shannon limit; supply gamma_lim");
		r.gamma_lim_db = shannon_limit({c, Rational(P, Q), channel}, opts.shannon_tol_db);
	}
	if (channel == ChannelKind::rayleigh)
		r.warnings.push_back("memory is selected with the AWGN genie bound");

	r.m = select_memory(c, basic.N, basic.alpha, r.gamma_lim_db, p_target);

	out.spec.basic = basic;
	out.spec.m = r.m;
	out.spec.interleaver_seed = opts.interleaver_seed;
	out.spec.L = opts.L;
	out.spec.d = opts.delay.value_or(3 * r.m);
	out.interleavers = make_interleavers(opts.interleaver_seed, r.m, basic.code_length());
	return out;
}

std::string format_report(const ConstructionReport &r)
{
	char buf[512];
	std::snprintf(buf, sizeof buf,
	              "signal_set=%s rate=%d/%d interval=(1/%d,1/%d] alpha=%s B=%d p_target=%g gamma_lim_db=%.2f%s m=%d "
	              "channel=%s",
	              r.constellation.c_str(), r.P, r.Q, r.N + 1, r.N, r.alpha.str().c_str(), r.B, r.p_target,
	              r.gamma_lim_db, r.gamma_lim_supplied ? "(supplied)" : "(computed)", r.m, to_string(r.channel).c_str());
	std::string s = buf;
	for (const auto &w : r.warnings)
		s += "\nwarning: " + w;
	return s;
}

}
