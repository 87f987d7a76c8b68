#ifndef BMSTRUN_SIM_HPP_
#define BMSTRUN_SIM_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bmstrun/bmst.hpp"
#include "bmstrun/channels.hpp"
#include "bmstrun/constellation.hpp"
#include "bmstrun/runcode.hpp"

namespace bmstrun
{

inline constexpr int kConfigSchemaVersion = 1;

struct StopRule
{
	std::int64_t min_symbol_errors = 100;
	std::int64_t max_frames = 100000;
};

/// One Monte Carlo sweep. Parsed from a flat "key = value" file; see README for the keys.
struct SimConfig
{
	int schema = kConfigSchemaVersion;
	std::string constellation = "BPSK"; ///< builtin name or constellation file
	ChannelKind channel = ChannelKind::awgn;
	int P = 1;
	int Q = 2;
	int B = 0;                 ///< 0 picks the smallest B with Q*B >= 1000
	std::optional<int> memory; ///< absent: uncoupled RUN code
	int L = 20;
	std::optional<int> delay; ///< absent: 3m
	int max_iters = 18;
	TrailingEdge trailing = TrailingEdge::decision_feedback;
	CheckKernel kernel = CheckKernel::direct;
	std::vector<double> snr_grid;
	StopRule stop;
	std::uint64_t seed = 1;
	std::optional<std::uint64_t> interleaver_seed; ///< absent: seed
	std::optional<double> sigma_override;
	bool dither = true;
	int frames_per_batch = 8;
	int paper_B = 0; ///< B used by --paper-scale (0 keeps B)
	std::string output;
	std::vector<std::string> metrics{"SER", "BER"};
};

SimConfig parse_config(std::istream &in);
SimConfig load_config(const std::filesystem::path &path);
/// Throws ConfigError when an invariant fails (empty or non-increasing grid, bad stop rule, ...).
void validate(const SimConfig &cfg);
/// Stable textual form used for the config hash.
std::string canonical(const SimConfig &cfg);
/// L = 1000 and B = paper_B (when set).
void apply_paper_scale(SimConfig &cfg);

int resolved_B(const SimConfig &cfg);
int resolved_delay(const SimConfig &cfg);

struct SimRow
{
	double snr_db = 0.0;
	std::int64_t frames = 0;
	std::int64_t symbols = 0;
	std::int64_t symbol_errors = 0;
	double ser = 0.0;
	double ser_stderr = 0.0;
	std::int64_t bit_errors = 0;
	double ber = 0.0;
	double wall_seconds = 0.0;

	friend bool operator==(const SimRow &, const SimRow &) = default;
};

struct SimResult
{
	std::vector<std::pair<std::string, std::string>> metadata;
	std::vector<SimRow> rows;

	friend bool operator==(const SimResult &, const SimResult &) = default;
};

/// Column order of the result CSV.
const std::vector<std::string> &csv_columns();

struct SweepHooks
{
	/// Called with the first frame of the first SNR point: data blocks and encoder output.
	std::function<void(const std::vector<GroupVector> &u, const EncodedFrame &frame)> frame_dump;
	/// Decoder trace for the first frame of the first SNR point (coupled codes only).
	TraceSink trace;
	/// Progress after every SNR point.
	std::function<void(const SimRow &)> progress;
};

/// Runs the sweep. The result is a deterministic function of the config for any worker count
/// (0 = default_workers()). Only the L data blocks count toward SER/BER.
SimResult run_sweep(const SimConfig &cfg, int workers = 0, const SweepHooks &hooks = {});

void emit_csv(const SimResult &result, std::ostream &out);
void emit_csv(const SimResult &result, const std::filesystem::path &path);
SimResult parse_csv(std::istream &in);

/// Per-t CSV of the u, v and c symbols of one frame.
void write_frame_dump(std::ostream &out, const std::vector<GroupVector> &u, const EncodedFrame &frame);

struct ConstructionReport
{
	std::string constellation;
	int P = 0, Q = 0, N = 0, B = 0;
	Rational alpha;
	double p_target = 0.0;
	double gamma_lim_db = 0.0;
	bool gamma_lim_supplied = false;
	int m = 0;
	ChannelKind channel = ChannelKind::awgn;
	std::vector<std::string> warnings;
};

struct Construction
{
	BmstSpec spec;
	std::vector<Permutation> interleavers;
	ConstructionReport report;
};

struct ConstructOptions
{
	std::optional<double> gamma_lim_db; ///< pin the Shannon limit instead of computing it
	std::uint64_t interleaver_seed = 1;
	int L = 20;
	std::optional<int> delay;
	double shannon_tol_db = 0.05;
};

/// (N, alpha) from the rate, the Shannon limit, the smallest memory whose genie bound
/// at the limit meets p_target, then m random interleavers of length Q*B.
Construction construct_code(const LabeledConstellation &c, int P, int Q, int B, double p_target, ChannelKind channel,
                            const ConstructOptions &opts = {});

/// Table-style rendering in column order: signal set, P/Q, (1/(N+1), 1/N), alpha, B, p_target, gamma_lim, m.
std::string format_report(const ConstructionReport &r);

/// 64-bit FNV-1a, hex.
std::string fnv1a_hex(const std::string &text);

/// Git revision baked in at build time ("unknown" outside a checkout).
std::string git_revision();

}

#endif
