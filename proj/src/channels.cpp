#include "bmstrun/channels.hpp"

#include <numbers>
#include <stdexcept>

#include "bmstrun/error.hpp"

namespace bmstrun
{

ChannelKind parse_channel_kind(const std::string &s)
{
	if (s == "awgn" || s == "AWGN")
		return ChannelKind::awgn;
	if (s == "rayleigh" || s == "Rayleigh")
		return ChannelKind::rayleigh;
	throw ConfigError("unknown channel kind: " + s);
}

std::string to_string(ChannelKind k)
{
	return k == ChannelKind::awgn ? "awgn" : "rayleigh";
}

ChannelRealization transmit_awgn(const LabeledConstellation &c, const GroupVector &symbols, double sigma,
                                 Xoshiro256 &noise)
{
	if (!(sigma > 0.0))
		throw std::invalid_argument("transmit_awgn: sigma must be positive");
	const int dim = c.dim();
	ChannelRealization rx{dim, std::vector<double>(symbols.size() * dim), {}, sigma};
	for (std::size_t j = 0; j < symbols.size(); ++j)
	{
		const auto s = c.map(symbols[j]);
		for (int k = 0; k < dim; ++k)
			rx.y[j * dim + k] = s[k] + sigma * noise.normal();
	}
	return rx;
}

void draw_rayleigh_gain(int dim, Xoshiro256 &fading, std::span<double> out)
{
	// h = (X + iY) / sqrt(2) with X, Y standard normal, so E|h|^2 = 1.
	const double re = fading.normal() * std::numbers::sqrt2 / 2.0;
	const double im = fading.normal() * std::numbers::sqrt2 / 2.0;
	if (dim == 1)
	{
		out[0] = std::hypot(re, im);
	}
	else
	{
		out[0] = re;
		out[1] = im;
	}
}

ChannelRealization transmit_rayleigh(const LabeledConstellation &c, const GroupVector &symbols, double sigma,
                                     Xoshiro256 &noise, Xoshiro256 &fading, bool unit_gains)
{
	if (!(sigma > 0.0))
		throw std::invalid_argument("transmit_rayleigh: sigma must be positive");
	const int dim = c.dim();
	const std::size_t stride = dim == 1 ? 1 : 2;
	ChannelRealization rx{dim, std::vector<double>(symbols.size() * dim), std::vector<double>(symbols.size() * stride),
	                      sigma};
	double hs[2];
	for (std::size_t j = 0; j < symbols.size(); ++j)
	{
		auto gain = std::span<double>(rx.gains).subspan(j * stride, stride);
		if (unit_gains)
		{
			gain[0] = 1.0;
			if (stride == 2)
				gain[1] = 0.0;
		}
		else
		{
			draw_rayleigh_gain(dim, fading, gain);
		}
		apply_gain(dim, gain, c.map(symbols[j]), hs);
		for (int k = 0; k < dim; ++k)
			rx.y[j * dim + k] = hs[k] + sigma * noise.normal();
	}
	return rx;
}

void evidence_kernel(const LabeledConstellation &c, std::span<const double> y, std::span<const double> gains,
                     std::span<const Symbol> dither, double sigma, std::span<double> out)
{
	if (!(sigma > 0.0))
		throw std::invalid_argument("channel evidence: sigma must be positive");
	const int q = c.q();
	const int dim = c.dim();
	const std::size_t n = y.size() / dim;
	const std::size_t stride = dim == 1 ? 1 : 2;
	if (out.size() != n * q || (!dither.empty() && dither.size() != n) || (!gains.empty() && gains.size() != n * stride))
		throw std::invalid_argument("channel evidence: inconsistent lengths");

	const double scale = -1.0 / (2.0 * sigma * sigma);
	double logp[64];
	std::vector<double> heap;
	std::span<double> lp(logp, q <= 64 ? q : 0);
	if (q > 64)
	{
		heap.resize(q);
		lp = heap;
	}
	double hs[2];
	for (std::size_t j = 0; j < n; ++j)
	{
		const Symbol w = dither.empty() ? 0 : dither[j];
		const auto gain = gains.empty() ? std::span<const double>{} : gains.subspan(j * stride, stride);
		for (int v = 0; v < q; ++v)
		{
			apply_gain(dim, gain, c.map((v + w) % q), hs);
			double d2 = 0.0;
			for (int k = 0; k < dim; ++k)
			{
				const double diff = y[j * dim + k] - hs[k];
				d2 += diff * diff;
			}
			lp[v] = scale * d2;
		}
		normalize_from_log(lp, out.subspan(j * q, q));
	}
}

MessageBlock channel_evidence(const LabeledConstellation &c, const ChannelRealization &rx, const GroupVector &dither)
{
	if (rx.dim != c.dim() || dither.size() != rx.size())
		throw std::invalid_argument("channel_evidence: realization does not match constellation or dither");
	MessageBlock out(rx.size(), c.q());
	evidence_kernel(c, rx.y, rx.gains, dither.symbols(), rx.sigma, out.flat());
	return out;
}

}
