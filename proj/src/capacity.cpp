#include "bmstrun/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bmstrun/error.hpp"
#include "bmstrun/parallel.hpp"
#include "bmstrun/rng.hpp"

namespace bmstrun
{

namespace
{

struct ChunkSums
{
	double sum = 0.0;
	double sumsq = 0.0;
};

// One chunk of stratified samples. Noise is drawn in standard units and scaled by
// sigma, so a fixed seed gives common random numbers across SNR values.
ChunkSums capacity_chunk(const LabeledConstellation &c, double sigma, ChannelKind kind, std::uint64_t seed,
                         std::size_t chunk, std::size_t chunk_size)
{
	auto noise = substream(seed, Stream::capacity, chunk, 0);
	auto fading = substream(seed, Stream::capacity, chunk, 1);
	const int q = c.q();
	const int dim = c.dim();
	const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
	const double log2q = std::log2(static_cast<double>(q));
	const auto pts = c.mapped();

	std::vector<double> expo(q);
	double z[2] = {0.0, 0.0};
	double gain[2] = {1.0, 0.0};
	double hs[2], hsp[2];
	std::span<const double> g = kind == ChannelKind::awgn ? std::span<const double>{}
	                                                      : std::span<const double>(gain, dim == 1 ? 1 : 2);

	ChunkSums acc;
	for (std::size_t n = 0; n < chunk_size; ++n)
	{
		double loss = 0.0;
		for (int x = 0; x < q; ++x)
		{
			for (int k = 0; k < dim; ++k)
				z[k] = sigma * noise.normal();
			if (kind == ChannelKind::rayleigh)
				draw_rayleigh_gain(dim, fading, gain);
			apply_gain(dim, g, pts.subspan(x * dim, dim), hs);
			double z2 = 0.0;
			for (int k = 0; k < dim; ++k)
				z2 += z[k] * z[k];
			double mx = -INFINITY;
			for (int s = 0; s < q; ++s)
			{
				apply_gain(dim, g, pts.subspan(s * dim, dim), hsp);
				double d2 = 0.0;
				for (int k = 0; k < dim; ++k)
				{
					const double diff = z[k] + hs[k] - hsp[k];
					d2 += diff * diff;
				}
				expo[s] = (z2 - d2) * inv2s2;
				mx = std::max(mx, expo[s]);
			}
			double sum = 0.0;
			for (int s = 0; s < q; ++s)
				sum += std::exp(expo[s] - mx);
			loss += (mx + std::log(sum)) / std::numbers::ln2;
		}
		const double sample = log2q - loss / q;
		acc.sum += sample;
		acc.sumsq += sample * sample;
	}
	return acc;
}

CapacityEstimate estimate(const LabeledConstellation &c, double snr_db, ChannelKind kind, double precision,
                          const CapacityOptions &opts, int workers)
{
	if (!(precision > 0.0))
		throw std::invalid_argument("iud_capacity: precision must be positive");
	const double sigma = sigma_from_snr(c, snr_db).sigma;
	const std::size_t per_round = std::max<std::size_t>(1, opts.chunks_per_round);
	std::vector<ChunkSums> round(per_round);

	double sum = 0.0, sumsq = 0.0;
	std::size_t n = 0, next_chunk = 0;
	CapacityEstimate est;
	while (true)
	{
		parallel_for(per_round, workers, [&](std::size_t i) {
			round[i] = capacity_chunk(c, sigma, kind, opts.seed, next_chunk + i, opts.chunk_size);
		});
		for (const auto &r : round)
		{
			sum += r.sum;
			sumsq += r.sumsq;
		}
		next_chunk += per_round;
		n += per_round * opts.chunk_size;

		const double mean = sum / n;
		const double var = std::max(0.0, (sumsq / n - mean * mean) * n / (n - 1.0));
		est = {mean, std::sqrt(var / n), n};
		if (est.std_error < precision || n >= opts.max_samples)
			return est;
	}
}

}

CapacityEstimate iud_capacity(const LabeledConstellation &c, double snr_db, ChannelKind kind, double precision,
                              const CapacityOptions &opts)
{
	return estimate(c, snr_db, kind, precision, opts, opts.workers > 0 ? opts.workers : default_workers());
}

CapacityEstimate iud_capacity_serial(const LabeledConstellation &c, double snr_db, ChannelKind kind, double precision,
                                     const CapacityOptions &opts)
{
	return estimate(c, snr_db, kind, precision, opts, 1);
}

double shannon_limit(const CapacityQuery &query, double tol_db, const ShannonLimitOptions &opts)
{
	const auto &c = query.constellation;
	const double r = query.rate.to_double();
	if (!(r > 0.0 && r < 1.0))
		throw ConfigError("shannon_limit: rate must lie in (0, 1)");
	if (!(tol_db > 0.0))
		throw std::invalid_argument("shannon_limit: tolerance must be positive");
	const double target = r * std::log2(static_cast<double>(c.q()));

	double lo = opts.lo_db, hi = opts.hi_db;
	auto precision_for = [&](double width) { return std::max(opts.final_precision, 0.002 * width); };
	auto cap = [&](double snr, double width) {
		return iud_capacity(c, snr, query.kind, precision_for(width), opts.capacity).bits;
	};

	const double width0 = hi - lo;
	if (cap(lo, width0) > target || cap(hi, width0) < target)
		throw RuntimeFailure("shannon_limit: target spectral efficiency not bracketed by [" + std::to_string(lo) + ", " +
		                     std::to_string(hi) + "] dB");
	while (hi - lo > tol_db)
	{
		const double mid = 0.5 * (lo + hi);
		if (cap(mid, hi - lo) < target)
			lo = mid;
		else
			hi = mid;
	}
	return 0.5 * (lo + hi);
}

}
