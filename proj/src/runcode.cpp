#include "bmstrun/runcode.hpp"

#include <stdexcept>
#include <vector>

#include "bmstrun/channels.hpp"
#include "bmstrun/error.hpp"

namespace bmstrun
{

std::pair<int, Rational> time_sharing_params(int P, int Q)
{
	if (P < 1 || P > Q)
		throw ConfigError("RUN code rate P/Q requires 1 <= P <= Q (got P=" + std::to_string(P) +
		                  ", Q=" + std::to_string(Q) + ")");
	const int N = Q / P;
	return {N, Rational(Q - static_cast<std::int64_t>(N) * P, P)};
}

RunSpec RunSpec::make(int P, int Q, int B)
{
	if (B < 1)
		throw ConfigError("RUN code fold B must be at least 1");
	const auto [N, alpha] = time_sharing_params(P, Q);
	return {P, Q, N, alpha, B};
}

GroupVector apply_dither(const GroupVector &v, const GroupVector &w)
{
	if (v.size() != w.size() || v.q() != w.q())
		throw std::invalid_argument("apply_dither: length or alphabet mismatch");
	GroupVector out(v.q(), v.size());
	const int q = v.q();
	for (std::size_t j = 0; j < v.size(); ++j)
		out[j] = (v[j] + w[j]) % q;
	return out;
}

GroupVector negate(const GroupVector &w)
{
	GroupVector out(w.q(), w.size());
	for (std::size_t j = 0; j < w.size(); ++j)
		out[j] = (w.q() - w[j]) % w.q();
	return out;
}

GroupVector run_encode(const RunSpec &spec, const GroupVector &u)
{
	if (u.size() != spec.info_length())
		throw std::invalid_argument("run_encode: expected " + std::to_string(spec.info_length()) + " symbols, got " +
		                            std::to_string(u.size()));
	GroupVector v(u.q(), spec.code_length());
	for (std::size_t i = 0; i < u.size(); ++i)
	{
		const auto [start, len] = spec.group(i);
		for (int r = 0; r < len; ++r)
			v[start + r] = u[i];
	}
	return v;
}

MessageBlock channel_priors(const LabeledConstellation &c, std::span<const double> y, const GroupVector &w,
                            double sigma)
{
	MessageBlock out(w.size(), c.q());
	evidence_kernel(c, y, {}, w.symbols(), sigma, out.flat());
	return out;
}

void siso_decode_into(const RunSpec &spec, int q, std::span<const double> priors, std::span<double> app,
                      std::span<double> extrinsic, std::span<double> scratch)
{
	auto logsum = scratch.first(q);
	const std::size_t qs = static_cast<std::size_t>(q);
	for (std::size_t i = 0; i < spec.info_length(); ++i)
	{
		const auto [start, len] = spec.group(i);
		std::fill(logsum.begin(), logsum.end(), 0.0);
		for (int r = 0; r < len; ++r)
		{
			const double *p = priors.data() + (start + r) * qs;
			for (std::size_t k = 0; k < qs; ++k)
				logsum[k] += std::log(std::max(p[k], kProbFloor));
		}
		if (!app.empty())
			normalize_from_log(logsum, app.subspan(i * qs, qs));
		if (extrinsic.empty())
			continue;
		for (int r = 0; r < len; ++r)
		{
			auto out = extrinsic.subspan((start + r) * qs, qs);
			if (len == 1)
			{
				std::fill(out.begin(), out.end(), 1.0 / q);
				continue;
			}
			const double *p = priors.data() + (start + r) * qs;
			for (std::size_t k = 0; k < qs; ++k)
				out[k] = logsum[k] - std::log(std::max(p[k], kProbFloor));
			normalize_from_log(std::span<const double>(out.data(), qs), out);
		}
	}
}

SisoOutput siso_decode(const RunSpec &spec, const MessageBlock &priors)
{
	if (priors.size() != spec.code_length())
		throw std::invalid_argument("siso_decode: expected " + std::to_string(spec.code_length()) + " priors, got " +
		                            std::to_string(priors.size()));
	for (std::size_t j = 0; j < priors.size(); ++j)
	{
		double sum = 0.0;
		for (double x : priors[j])
		{
			if (!(x >= 0.0) || !std::isfinite(x))
				throw std::invalid_argument("siso_decode: prior entries must be finite and nonnegative");
			sum += x;
		}
		if (std::abs(sum - 1.0) > 1e-9)
			throw std::invalid_argument("siso_decode: prior " + std::to_string(j) + " is not normalized");
	}
	const int q = priors.q();
	SisoOutput out{MessageBlock(spec.info_length(), q), MessageBlock(spec.code_length(), q)};
	std::vector<double> scratch(q);
	siso_decode_into(spec, q, priors.flat(), out.app.flat(), out.extrinsic.flat(), scratch);
	return out;
}

}
