#include "bmstrun/check_node.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "bmstrun/group.hpp"

namespace bmstrun
{

void cyclic_convolve(std::span<const double> x, std::span<const double> y, std::span<double> out)
{
	const std::size_t q = x.size();
	for (std::size_t a = 0; a < q; ++a)
	{
		double s = 0.0;
		for (std::size_t b = 0; b <= a; ++b)
			s += x[b] * y[a - b];
		for (std::size_t b = a + 1; b < q; ++b)
			s += x[b] * y[a + q - b];
		out[a] = s;
	}
}

namespace
{

// out(a) = x(-a mod q)
void reverse_into(std::span<const double> x, std::span<double> out)
{
	const std::size_t q = x.size();
	out[0] = x[0];
	for (std::size_t a = 1; a < q; ++a)
		out[a] = x[q - a];
}

}

ZeroSumCheck::ZeroSumCheck(int q, CheckKernel kernel) : q_(q), kernel_(kernel), tmp_(q)
{
	if (q < 2)
		throw std::invalid_argument("ZeroSumCheck: q must be at least 2");
	twiddle_.resize(q);
	for (int k = 0; k < q; ++k)
		twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / q);
}

void ZeroSumCheck::run(int k, std::span<const double> in, std::span<double> out)
{
	if (k < 1 || in.size() < static_cast<std::size_t>(k * q_) || out.size() < static_cast<std::size_t>(k * q_))
		throw std::invalid_argument("ZeroSumCheck::run: bad edge count or buffer size");
	if (k == 1)
	{
		set_indicator(out.first(q_), 0);
		return;
	}
	if (kernel_ == CheckKernel::direct)
		run_direct(k, in, out);
	else
		run_transform(k, in, out);
}

void ZeroSumCheck::run_direct(int k, std::span<const double> in, std::span<double> out)
{
	const std::size_t q = q_;
	fwd_.resize(k * q);
	bwd_.resize(k * q);
	auto msg = [&](std::size_t i) { return in.subspan(i * q, q); };
	auto F = [&](std::size_t i) { return std::span<double>(fwd_).subspan(i * q, q); };
	auto Bk = [&](std::size_t i) { return std::span<double>(bwd_).subspan(i * q, q); };

	std::copy_n(msg(0).begin(), q, F(0).begin());
	for (int i = 1; i + 1 < k; ++i)
		cyclic_convolve(F(i - 1), msg(i), F(i));
	std::copy_n(msg(k - 1).begin(), q, Bk(k - 1).begin());
	for (int i = k - 2; i >= 1; --i)
		cyclic_convolve(msg(i), Bk(i + 1), Bk(i));

	for (int i = 0; i < k; ++i)
	{
		auto o = out.subspan(i * q, q);
		if (i == 0)
			reverse_into(Bk(1), o);
		else if (i == k - 1)
			reverse_into(F(k - 2), o);
		else
		{
			cyclic_convolve(F(i - 1), Bk(i + 1), tmp_);
			reverse_into(tmp_, o);
		}
		normalize(o);
	}
}

void ZeroSumCheck::run_transform(int k, std::span<const double> in, std::span<double> out)
{
	const std::size_t q = q_;
	spec_.assign(k * q, {});
	cfwd_.resize(k * q);
	cbwd_.resize(k * q);
	cprod_.resize(q);

	for (int i = 0; i < k; ++i)
		for (std::size_t f = 0; f < q; ++f)
		{
			std::complex<double> s = 0.0;
			for (std::size_t a = 0; a < q; ++a)
				s += in[i * q + a] * twiddle_[(a * f) % q];
			spec_[i * q + f] = s;
		}

	for (std::size_t f = 0; f < q; ++f)
	{
		cfwd_[f] = spec_[f];
		cbwd_[(k - 1) * q + f] = spec_[(k - 1) * q + f];
	}
	for (int i = 1; i < k; ++i)
		for (std::size_t f = 0; f < q; ++f)
			cfwd_[i * q + f] = cfwd_[(i - 1) * q + f] * spec_[i * q + f];
	for (int i = k - 2; i >= 0; --i)
		for (std::size_t f = 0; f < q; ++f)
			cbwd_[i * q + f] = spec_[i * q + f] * cbwd_[(i + 1) * q + f];

	for (int i = 0; i < k; ++i)
	{
		for (std::size_t f = 0; f < q; ++f)
		{
			std::complex<double> p = 1.0;
			if (i > 0)
				p *= cfwd_[(i - 1) * q + f];
			if (i + 1 < k)
				p *= cbwd_[(i + 1) * q + f];
			cprod_[f] = p;
		}
		// inverse transform evaluated at -a, i.e. the reversed convolution
		auto o = out.subspan(i * q, q);
		for (std::size_t a = 0; a < q; ++a)
		{
			const std::size_t neg = (q - a) % q;
			std::complex<double> s = 0.0;
			for (std::size_t f = 0; f < q; ++f)
				s += cprod_[f] * std::conj(twiddle_[(neg * f) % q]);
			o[a] = std::max(s.real() / static_cast<double>(q), 0.0);
		}
		normalize(o);
	}
}

}
