#ifndef BMSTRUN_CHANNELS_HPP_
#define BMSTRUN_CHANNELS_HPP_

#include <span>
#include <string>
#include <vector>

#include "bmstrun/constellation.hpp"
#include "bmstrun/group.hpp"
#include "bmstrun/rng.hpp"

namespace bmstrun
{

enum class ChannelKind
{
	awgn,
	rayleigh,
};

ChannelKind parse_channel_kind(const std::string &s);
std::string to_string(ChannelKind k);

/// Received samples for one block of symbols.
///
/// Fading gains are per symbol and known at the receiver. For 1-D signal sets a gain
/// is one real magnitude; for 2-D sets it is a (re, im) pair applied as a rotation
/// plus scaling. An empty gains vector means h = 1 throughout.
struct ChannelRealization
{
	int dim = 1;
	std::vector<double> y;
	std::vector<double> gains;
	double sigma = 1.0;

	std::size_t size() const { return y.size() / dim; }
	std::size_t gain_stride() const { return dim == 1 ? 1 : 2; }
};

/// y = phi(x) + z with z ~ N(0, sigma^2) per dimension. symbols are the already dithered labels.
ChannelRealization transmit_awgn(const LabeledConstellation &c, const GroupVector &symbols, double sigma,
                                 Xoshiro256 &noise);

/// y = h * phi(x) + z with i.i.d. Rayleigh gains, E|h|^2 = 1. Gains come from the fading
/// stream and are recorded in the realization. unit_gains forces h = 1 (test hook),
/// which makes the output identical to transmit_awgn on the same noise stream.
ChannelRealization transmit_rayleigh(const LabeledConstellation &c, const GroupVector &symbols, double sigma,
                                     Xoshiro256 &noise, Xoshiro256 &fading, bool unit_gains = false);

/// Draws one Rayleigh gain into out (1 value for dim 1, 2 for dim 2).
void draw_rayleigh_gain(int dim, Xoshiro256 &fading, std::span<double> out);

/// h * s for one symbol; gain may be empty (h = 1).
inline void apply_gain(int dim, std::span<const double> gain, std::span<const double> s, std::span<double> out)
{
	if (gain.empty())
	{
		for (int k = 0; k < dim; ++k)
			out[k] = s[k];
	}
	else if (dim == 1)
	{
		out[0] = gain[0] * s[0];
	}
	else
	{
		out[0] = gain[0] * s[0] - gain[1] * s[1];
		out[1] = gain[0] * s[1] + gain[1] * s[0];
	}
}

/// P_j(v) proportional to exp(-||y_j - h_j phi(v + w_j)||^2 / (2 sigma^2)), normalized.
MessageBlock channel_evidence(const LabeledConstellation &c, const ChannelRealization &rx, const GroupVector &dither);

/// Kernel shared by channel_evidence and channel_priors. gains empty means h = 1;
/// dither empty means w = 0. out holds n*q values.
void evidence_kernel(const LabeledConstellation &c, std::span<const double> y, std::span<const double> gains,
                     std::span<const Symbol> dither, double sigma, std::span<double> out);

}

#endif
