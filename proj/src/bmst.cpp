#include "bmstrun/bmst.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bmstrun/rng.hpp"

namespace bmstrun
{

std::vector<Permutation> make_interleavers(std::uint64_t seed, int m, std::size_t n)
{
	if (n < 1)
		throw std::invalid_argument("make_interleavers: length must be at least 1");
	if (m < 0)
		throw std::invalid_argument("make_interleavers: memory must be nonnegative");
	std::vector<Permutation> out;
	out.reserve(m);
	for (int i = 1; i <= m; ++i)
	{
		auto rng = substream(seed, Stream::interleaver, static_cast<std::uint64_t>(i));
		Permutation p(n);
		std::iota(p.begin(), p.end(), 0u);
		for (std::size_t j = n - 1; j > 0; --j)
			std::swap(p[j], p[rng.below(j + 1)]);
		out.push_back(std::move(p));
	}
	return out;
}

Rational effective_rate(const BmstSpec &spec)
{
	return Rational(static_cast<std::int64_t>(spec.L) * spec.basic.P,
	                static_cast<std::int64_t>(spec.L + spec.m) * spec.basic.Q);
}

namespace
{

void check_interleavers(const BmstSpec &spec, const std::vector<Permutation> &interleavers)
{
	if (interleavers.size() != static_cast<std::size_t>(spec.m))
		throw std::invalid_argument("BMST: expected " + std::to_string(spec.m) + " interleavers");
	for (const auto &p : interleavers)
		if (p.size() != spec.block_length())
			throw std::invalid_argument("BMST: interleaver length does not match Q*B");
}

}

EncodedFrame bmst_encode_frame(const BmstSpec &spec, const std::vector<Permutation> &interleavers,
                               const std::vector<GroupVector> &u_blocks)
{
	check_interleavers(spec, interleavers);
	if (spec.L < 1 || u_blocks.size() != static_cast<std::size_t>(spec.L))
		throw std::invalid_argument("bmst_encode: expected " + std::to_string(spec.L) + " data blocks");
	const int q = u_blocks.front().q();
	const std::size_t n = spec.block_length();
	const int T = spec.frame_blocks();

	EncodedFrame f;
	f.v.reserve(T);
	for (int t = 0; t < T; ++t)
	{
		if (t < spec.L)
		{
			if (u_blocks[t].q() != q)
				throw std::invalid_argument("bmst_encode: blocks over different alphabets");
			f.v.push_back(run_encode(spec.basic, u_blocks[t]));
		}
		else
		{
			f.v.emplace_back(q, n);
		}
	}
	f.c.reserve(T);
	for (int t = 0; t < T; ++t)
	{
		GroupVector c = f.v[t];
		for (int i = 1; i <= spec.m && t - i >= 0; ++i)
		{
			const auto &pi = interleavers[i - 1];
			const auto &prev = f.v[t - i];
			for (std::size_t j = 0; j < n; ++j)
				c[j] = (c[j] + prev[pi[j]]) % q;
		}
		f.c.push_back(std::move(c));
	}
	return f;
}

std::vector<GroupVector> bmst_encode(const BmstSpec &spec, const std::vector<Permutation> &interleavers,
                                     const std::vector<GroupVector> &u_blocks)
{
	return bmst_encode_frame(spec, interleavers, u_blocks).c;
}

std::vector<ProbMessage> node_equal(const std::vector<ProbMessage> &incoming)
{
	if (incoming.size() < 2)
		throw std::invalid_argument("node_equal: needs at least two edges");
	const std::size_t q = incoming.front().size();
	std::vector<double> total(q, 0.0), logs(q);
	for (const auto &m : incoming)
	{
		if (m.size() != q)
			throw std::invalid_argument("node_equal: messages of different lengths");
		for (std::size_t k = 0; k < q; ++k)
			total[k] += std::log(std::max(m[k], kProbFloor));
	}
	std::vector<ProbMessage> out;
	for (const auto &m : incoming)
	{
		for (std::size_t k = 0; k < q; ++k)
			logs[k] = total[k] - std::log(std::max(m[k], kProbFloor));
		ProbMessage o(q);
		normalize_from_log(logs, o);
		out.push_back(std::move(o));
	}
	return out;
}

std::vector<ProbMessage> node_add(const std::vector<ProbMessage> &incoming, int q, CheckKernel kernel)
{
	if (incoming.size() < 2)
		throw std::invalid_argument("node_add: needs a sum edge and at least one addend");
	const int k = static_cast<int>(incoming.size());
	std::vector<double> in(k * q), out(k * q);
	for (int e = 0; e < k; ++e)
	{
		if (incoming[e].size() != static_cast<std::size_t>(q))
			throw std::invalid_argument("node_add: message length differs from q");
		for (int a = 0; a < q; ++a)
			in[e * q + a] = e == 0 ? incoming[0][(q - a) % q] : incoming[e][a];
	}
	ZeroSumCheck check(q, kernel);
	check.run(k, in, out);
	std::vector<ProbMessage> result;
	for (int e = 0; e < k; ++e)
	{
		ProbMessage m(q);
		for (int a = 0; a < q; ++a)
			m[a] = e == 0 ? out[(q - a) % q] : out[e * q + a];
		result.push_back(std::move(m));
	}
	return result;
}

// ---------------------------------------------------------------------------
// Sliding-window decoder

namespace
{

struct Layer
{
	int time = -1;
	bool active = false; ///< false once decided, and always for termination blocks
	MessageBlock ch;     ///< channel evidence for c(t)
	MessageBlock run2v;  ///< RUN node -> "=" node
	MessageBlock v2run;  ///< "=" node -> RUN node
	std::vector<MessageBlock> v2p; ///< "=" node -> "+" node of slot t+i, indexed in v(t) order
	std::vector<MessageBlock> p2v; ///< "+" node of slot t+i -> "=" node, indexed in v(t) order
};

double entropy_bits(std::span<const double> p)
{
	double h = 0.0;
	for (double x : p)
		if (x > 0.0)
			h -= x * std::log2(x);
	return h;
}

}

struct SlidingWindowDecoder::Impl
{
	BmstSpec spec;
	LabeledConstellation c;
	std::vector<Permutation> pi;
	int q;
	std::size_t n;
	int T;
	int ring_size;
	std::vector<Layer> ring;
	ZeroSumCheck check;
	std::vector<double> edge_in, edge_out, sumlog, logp2v, logs, scratch, app, prev;
	std::vector<int> iters;
	TraceSink trace;

	Impl(BmstSpec s, LabeledConstellation cons, std::vector<Permutation> perms)
		: spec(std::move(s)), c(std::move(cons)), pi(std::move(perms)), q(c.q()), n(spec.block_length()),
		  T(spec.frame_blocks()), ring_size(spec.m + spec.d + 1), check(c.q(), spec.kernel)
	{
		if (spec.m < 0 || spec.d < 0 || spec.L < 1 || spec.max_iters < 1)
			throw std::invalid_argument("SlidingWindowDecoder: invalid spec");
		check_interleavers(spec, pi);
		ring.resize(ring_size);
		for (auto &l : ring)
		{
			l.ch = MessageBlock(n, q);
			l.run2v = MessageBlock(n, q);
			l.v2run = MessageBlock(n, q);
			l.v2p.assign(spec.m + 1, MessageBlock(n, q));
			l.p2v.assign(spec.m + 1, MessageBlock(n, q));
		}
		edge_in.resize((spec.m + 2) * q);
		edge_out.resize((spec.m + 2) * q);
		sumlog.resize(n * q);
		logp2v.resize(n * (spec.m + 1) * q);
		logs.resize(q);
		scratch.resize(q);
		app.resize(spec.basic.info_length() * q);
	}

	Layer &layer(int t) { return ring[t % ring_size]; }

	void admit(int t, const ChannelRealization &rx, const GroupVector &dither)
	{
		Layer &l = layer(t);
		l.time = t;
		evidence_kernel(c, rx.y, rx.gains, dither.symbols(), rx.sigma, l.ch.flat());
		l.run2v.fill_uniform();
		l.v2run.fill_uniform();
		for (auto &m : l.p2v)
			m.fill_uniform();
		if (t < spec.L)
		{
			l.active = true;
			for (auto &m : l.v2p)
				m.fill_uniform();
		}
		else
		{
			l.active = false;
			for (auto &m : l.v2p)
				for (std::size_t j = 0; j < n; ++j)
					set_indicator(m[j], 0);
		}
	}

	// "+" node of slot t: c(t) = v(t) + sum_i pi_i(v(t-i)).
	void plus_node(int t)
	{
		Layer &self = layer(t);
		const int addends = std::min(spec.m, t) + 1;
		const int k = addends + 1;
		const std::size_t qs = q;
		for (std::size_t j = 0; j < n; ++j)
		{
			const auto ch = self.ch[j];
			edge_in[0] = ch[0];
			for (std::size_t a = 1; a < qs; ++a)
				edge_in[a] = ch[qs - a];
			for (int i = 0; i < addends; ++i)
			{
				const std::size_t idx = i == 0 ? j : pi[i - 1][j];
				const auto src = layer(t - i).v2p[i][idx];
				std::copy(src.begin(), src.end(), edge_in.begin() + (i + 1) * qs);
			}
			check.run(k, edge_in, edge_out);
			for (int i = 0; i < addends; ++i)
			{
				Layer &dst = layer(t - i);
				if (!dst.active)
					continue;
				const std::size_t idx = i == 0 ? j : pi[i - 1][j];
				auto d = dst.p2v[i][idx];
				std::copy_n(edge_out.begin() + (i + 1) * qs, qs, d.begin());
			}
		}
	}

	// "=" node of v(t) followed by the RUN node; returns the largest message change.
	double equal_and_run(int t)
	{
		Layer &l = layer(t);
		const std::size_t qs = q;
		const int edges = std::min(spec.m, T - 1 - t) + 1;

		const std::size_t stride = static_cast<std::size_t>(spec.m + 1) * qs;
		for (std::size_t j = 0; j < n; ++j)
		{
			double *s = sumlog.data() + j * qs;
			double *lp = logp2v.data() + j * stride;
			std::fill_n(s, qs, 0.0);
			for (int i = 0; i < edges; ++i)
			{
				const auto p = l.p2v[i][j];
				for (std::size_t a = 0; a < qs; ++a)
				{
					lp[i * qs + a] = std::log(p[a]);
					s[a] += lp[i * qs + a];
				}
			}
			normalize_from_log(std::span<const double>(s, qs), l.v2run[j]);
		}

		double change = 0.0;
		prev.assign(l.run2v.flat().begin(), l.run2v.flat().end());
		siso_decode_into(spec.basic, q, l.v2run.flat(), {}, l.run2v.flat(), scratch);
		for (std::size_t x = 0; x < prev.size(); ++x)
			change = std::max(change, std::abs(prev[x] - l.run2v.flat()[x]));

		for (std::size_t j = 0; j < n; ++j)
		{
			double *s = sumlog.data() + j * qs;
			const double *lp = logp2v.data() + j * stride;
			const auto r = l.run2v[j];
			for (std::size_t a = 0; a < qs; ++a)
				s[a] += std::log(r[a]);
			for (int i = 0; i < edges; ++i)
			{
				for (std::size_t a = 0; a < qs; ++a)
					logs[a] = s[a] - lp[i * qs + a];
				auto out = l.v2p[i][j];
				for (std::size_t a = 0; a < qs; ++a)
					scratch[a] = out[a];
				normalize_from_log(logs, out);
				for (std::size_t a = 0; a < qs; ++a)
					change = std::max(change, std::abs(scratch[a] - out[a]));
			}
		}
		return change;
	}

	double process(int t)
	{
		plus_node(t);
		return layer(t).active ? equal_and_run(t) : 0.0;
	}

	void emit_trace(int target, int hi, int iteration, double change)
	{
		TraceEvent ev;
		ev.target = target;
		ev.iteration = iteration;
		ev.max_change = change;
		for (int t = target; t <= hi; ++t)
		{
			Layer &l = layer(t);
			double h = 0.0;
			for (std::size_t j = 0; j < n; ++j)
				h += entropy_bits(l.v2run[j]);
			ev.layer_times.push_back(t);
			ev.layer_entropy.push_back(h / n);
		}
		trace(ev);
	}

	std::vector<GroupVector> decode(const std::vector<ChannelRealization> &rx, const std::vector<GroupVector> &dithers)
	{
		if (rx.size() != static_cast<std::size_t>(T) || dithers.size() != static_cast<std::size_t>(T))
			throw std::invalid_argument("swd_decode: expected " + std::to_string(T) + " received blocks and dithers");
		for (int t = 0; t < T; ++t)
			if (rx[t].size() != n || dithers[t].size() != n || rx[t].dim != c.dim())
				throw std::invalid_argument("swd_decode: block " + std::to_string(t) + " has the wrong length");

		for (auto &l : ring)
		{
			l.time = -1;
			l.active = false;
		}
		iters.assign(spec.L, 0);
		const int d = std::min(spec.d, T - 1);
		for (int t = 0; t <= d; ++t)
			admit(t, rx[t], dithers[t]);

		std::vector<GroupVector> decided;
		decided.reserve(spec.L);
		for (int target = 0; target < spec.L; ++target)
		{
			const int hi = std::min(target + d, T - 1);
			int it = 0;
			while (it < spec.max_iters)
			{
				++it;
				double change = 0.0;
				for (int t = target; t <= hi; ++t)
					change = std::max(change, process(t));
				for (int t = hi; t >= target; --t)
					change = std::max(change, process(t));
				if (trace)
					emit_trace(target, hi, it, change);
				if (change < spec.stop_tolerance)
					break;
			}
			iters[target] = it;

			Layer &l = layer(target);
			siso_decode_into(spec.basic, q, l.v2run.flat(), app, {}, scratch);
			GroupVector u(q, spec.basic.info_length());
			for (std::size_t i = 0; i < u.size(); ++i)
				u[i] = hard_decision(std::span<const double>(app).subspan(i * q, q));

			l.active = false;
			if (spec.trailing == TrailingEdge::decision_feedback)
			{
				const GroupVector v = run_encode(spec.basic, u);
				for (auto &m : l.v2p)
					for (std::size_t j = 0; j < n; ++j)
						set_indicator(m[j], v[j]);
			}
			decided.push_back(std::move(u));

			const int next = target + d + 1;
			if (next < T)
				admit(next, rx[next], dithers[next]);
		}
		return decided;
	}
};

SlidingWindowDecoder::SlidingWindowDecoder(BmstSpec spec, LabeledConstellation constellation,
                                           std::vector<Permutation> interleavers)
	: impl_(std::make_unique<Impl>(std::move(spec), std::move(constellation), std::move(interleavers)))
{
}

SlidingWindowDecoder::~SlidingWindowDecoder() = default;
SlidingWindowDecoder::SlidingWindowDecoder(SlidingWindowDecoder &&) noexcept = default;
SlidingWindowDecoder &SlidingWindowDecoder::operator=(SlidingWindowDecoder &&) noexcept = default;

void SlidingWindowDecoder::set_trace(TraceSink sink)
{
	impl_->trace = std::move(sink);
}

std::vector<GroupVector> SlidingWindowDecoder::decode(const std::vector<ChannelRealization> &rx,
                                                      const std::vector<GroupVector> &dithers)
{
	return impl_->decode(rx, dithers);
}

const std::vector<int> &SlidingWindowDecoder::iterations() const
{
	return impl_->iters;
}

std::vector<GroupVector> swd_decode(const BmstSpec &spec, const LabeledConstellation &c,
                                    const std::vector<Permutation> &interleavers,
                                    const std::vector<ChannelRealization> &rx, const std::vector<GroupVector> &dithers)
{
	SlidingWindowDecoder dec(spec, c, interleavers);
	return dec.decode(rx, dithers);
}

}
