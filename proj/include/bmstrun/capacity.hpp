#ifndef BMSTRUN_CAPACITY_HPP_
#define BMSTRUN_CAPACITY_HPP_

#include <cstdint>

#include "bmstrun/channels.hpp"
#include "bmstrun/constellation.hpp"
#include "bmstrun/rational.hpp"

namespace bmstrun
{

struct CapacityOptions
{
	std::uint64_t seed = 0x5EEDCAFEull;
	/// Samples per chunk; chunk k always uses random substream k.
	std::size_t chunk_size = 1024;
	/// Chunks evaluated between stopping checks (independent of the worker count).
	std::size_t chunks_per_round = 8;
	std::size_t max_samples = std::size_t(1) << 24;
	int workers = 0; ///< 0 = default_workers()
};

struct CapacityEstimate
{
	double bits = 0.0;
	double std_error = 0.0;
	std::size_t samples = 0;
};

/// Mutual information with independent uniform inputs over the signal set, in bits
/// per channel use, estimated by Monte Carlo until the standard error drops below
/// precision. Every sample averages over all q transmitted points (stratification).
/// The estimate is a deterministic function of (arguments, options.seed) for any worker count.
CapacityEstimate iud_capacity(const LabeledConstellation &c, double snr_db, ChannelKind kind, double precision,
                              const CapacityOptions &opts = {});

/// Single-threaded reference for iud_capacity; produces bit-identical results.
CapacityEstimate iud_capacity_serial(const LabeledConstellation &c, double snr_db, ChannelKind kind, double precision,
                                     const CapacityOptions &opts = {});

struct CapacityQuery
{
	LabeledConstellation constellation;
	Rational rate; ///< symbols per channel use, 0 < rate < 1
	ChannelKind kind = ChannelKind::awgn;
};

struct ShannonLimitOptions
{
	double lo_db = -20.0;
	double hi_db = 30.0;
	double final_precision = 2e-4; ///< bits; tightened toward this as the bracket shrinks
	CapacityOptions capacity{};
};

/// SNR (dB) where iud_capacity equals rate * log2(q), by bisection to within tol_db.
double shannon_limit(const CapacityQuery &query, double tol_db = 0.05, const ShannonLimitOptions &opts = {});

}

#endif
