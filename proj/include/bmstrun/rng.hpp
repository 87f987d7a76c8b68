#ifndef BMSTRUN_RNG_HPP_
#define BMSTRUN_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace bmstrun
{

/// SplitMix64 step; used only to expand seeds into generator state.
inline std::uint64_t splitmix64(std::uint64_t &state)
{
	std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
	return z ^ (z >> 31);
}

/// Independent random streams derived from one run seed. Every consumer of
/// randomness draws from its own stream so that adding draws in one place never
/// shifts another.
enum class Stream : std::uint64_t
{
	data        = 1,
	dither      = 2,
	noise       = 3,
	fading      = 4,
	interleaver = 5,
	capacity    = 6,
	test        = 7,
};

/// xoshiro256** (Blackman & Vigna). All integer paths are platform independent;
/// the Gaussian path goes through libm and is reproducible up to libm rounding.
class Xoshiro256
{
public:
	using result_type = std::uint64_t;

	explicit Xoshiro256(std::uint64_t seed = 0)
	{
		for (auto &w : s_)
			w = splitmix64(seed);
	}

	static constexpr result_type min() { return 0; }
	static constexpr result_type max() { return ~result_type(0); }

	result_type operator()()
	{
		const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
		const std::uint64_t t = s_[1] << 17;
		s_[2] ^= s_[0];
		s_[3] ^= s_[1];
		s_[1] ^= s_[2];
		s_[0] ^= s_[3];
		s_[2] ^= t;
		s_[3] = rotl(s_[3], 45);
		return result;
	}

	/// Uniform on [0, 1) with 53 random bits.
	double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

	/// Unbiased integer in [0, n) (Lemire's multiply-and-reject).
	std::uint64_t below(std::uint64_t n)
	{
		unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
		auto low = static_cast<std::uint64_t>(m);
		if (low < n)
		{
			const std::uint64_t threshold = (0 - n) % n;
			while (low < threshold)
			{
				m = static_cast<unsigned __int128>((*this)()) * n;
				low = static_cast<std::uint64_t>(m);
			}
		}
		return static_cast<std::uint64_t>(m >> 64);
	}

	/// Standard normal via Box-Muller; the second variate is cached.
	double normal()
	{
		if (has_spare_)
		{
			has_spare_ = false;
			return spare_;
		}
		double u1 = uniform();
		while (u1 <= 0.0)
			u1 = uniform();
		const double u2 = uniform();
		const double r = std::sqrt(-2.0 * std::log(u1));
		const double a = 2.0 * std::numbers::pi * u2;
		spare_ = r * std::sin(a);
		has_spare_ = true;
		return r * std::cos(a);
	}

private:
	static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

	std::array<std::uint64_t, 4> s_{};
	double spare_ = 0.0;
	bool has_spare_ = false;
};

/// Generator for substream (stream, i, j) of a run seed.
inline Xoshiro256 substream(std::uint64_t seed, Stream stream, std::uint64_t i = 0, std::uint64_t j = 0)
{
	std::uint64_t h = seed;
	std::uint64_t mixed = splitmix64(h);
	for (std::uint64_t part : {static_cast<std::uint64_t>(stream), i, j})
	{
		h = mixed ^ (part * 0xD6E8FEB86659FD93ull);
		mixed = splitmix64(h);
	}
	return Xoshiro256(mixed);
}

}

#endif
