#include "doctest.h"

#include <cmath>
#include <numeric>

#include "bmstrun/error.hpp"
#include "bmstrun/rng.hpp"
#include "bmstrun/runcode.hpp"
#include "oracles.hpp"

using namespace bmstrun;

TEST_CASE("time sharing parameters")
{
	auto [n1, a1] = time_sharing_params(3, 8);
	CHECK(n1 == 2);
	CHECK(a1 == Rational(2, 3));
	auto [n2, a2] = time_sharing_params(1, 8);
	CHECK(n2 == 8);
	CHECK(a2 == Rational(0));
	auto [n3, a3] = time_sharing_params(239, 255);
	CHECK(n3 == 1);
	CHECK(a3 == Rational(16, 239));
	auto [n4, a4] = time_sharing_params(5, 5);
	CHECK(n4 == 1);
	CHECK(a4 == Rational(0));
	CHECK_THROWS_AS(time_sharing_params(0, 3), ConfigError);
	CHECK_THROWS_AS(time_sharing_params(4, 3), ConfigError);
}

TEST_CASE("time sharing invariants over random rates")
{
	auto rng = substream(3, Stream::test);
	for (int trial = 0; trial < 500; ++trial)
	{
		const int Q = 1 + static_cast<int>(rng.below(64));
		const int P = 1 + static_cast<int>(rng.below(Q));
		const auto spec = RunSpec::make(P, Q, 1 + static_cast<int>(rng.below(3)));
		CHECK(Rational(1, spec.N + 1) < Rational(P, Q));
		CHECK(!(Rational(1, spec.N) < Rational(P, Q)));
		CHECK(spec.alpha == Rational(Q - spec.N * P, P));
		CHECK(spec.long_groups() * (spec.N + 1) + spec.short_groups() * spec.N == Q);
		CHECK(spec.long_groups() >= 0);
		CHECK(spec.short_groups() >= 0);
		GroupVector u(5, spec.info_length());
		CHECK(run_encode(spec, u).size() == spec.code_length());
	}
}

TEST_CASE("run encoding layout")
{
	CHECK(run_encode(RunSpec::make(1, 2), GroupVector(4, {3})) == GroupVector(4, {3, 3}));
	CHECK(run_encode(RunSpec::make(3, 8), GroupVector(2, {1, 0, 1})) == GroupVector(2, {1, 1, 1, 0, 0, 0, 1, 1}));
	CHECK(run_encode(RunSpec::make(1, 1), GroupVector(5, {4})) == GroupVector(5, {4}));
	// second fold repeats the layout
	CHECK(run_encode(RunSpec::make(3, 8, 2), GroupVector(2, {1, 0, 1, 0, 1, 1})) ==
	      GroupVector(2, {1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1}));
	CHECK_THROWS(run_encode(RunSpec::make(3, 8), GroupVector(2, {1, 0})));
}

TEST_CASE("dither arithmetic")
{
	CHECK(apply_dither(GroupVector(3, {1, 2}), GroupVector(3, {0, 0})) == GroupVector(3, {1, 2}));
	CHECK(apply_dither(GroupVector(3, {2, 2}), GroupVector(3, {2, 1})) == GroupVector(3, {1, 0}));
	auto rng = substream(4, Stream::test);
	for (int q : {2, 3, 5, 16})
	{
		GroupVector v(q, 50), w(q, 50);
		for (std::size_t j = 0; j < 50; ++j)
		{
			v[j] = static_cast<Symbol>(rng.below(q));
			w[j] = static_cast<Symbol>(rng.below(q));
		}
		CHECK(apply_dither(apply_dither(v, w), negate(w)) == v);
	}
	CHECK_THROWS(apply_dither(GroupVector(3, 2), GroupVector(3, 3)));
	CHECK_THROWS(GroupVector(3, {0, 3}));
}

TEST_CASE("channel priors")
{
	const auto bpsk = builtin("BPSK");
	const GroupVector w0(2, 1);

	std::vector<double> mid{0.0};
	auto p = channel_priors(bpsk, mid, w0, 1.0);
	CHECK(p[0][0] == doctest::Approx(0.5));

	std::vector<double> y{1.0};
	p = channel_priors(bpsk, y, w0, 1.0);
	CHECK(p[0][0] / p[0][1] == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
	CHECK(p[0][0] == doctest::Approx(0.8808).epsilon(1e-4));

	// dither w=1 swaps the roles of v=0 and v=1
	p = channel_priors(bpsk, y, GroupVector(2, {1}), 1.0);
	CHECK(p[0][1] / p[0][0] == doctest::Approx(std::exp(2.0)).epsilon(1e-12));

	// noiseless limit on 8-PSK with dither
	const auto psk = builtin("8-PSK");
	const GroupVector w(8, {5});
	const auto s = psk.map((3 + 5) % 8);
	std::vector<double> y2{s[0], s[1]};
	p = channel_priors(psk, y2, w, 1e-4);
	CHECK(p[0][3] == doctest::Approx(1.0));
	CHECK(hard_decision(p[0]) == 3);

	CHECK_THROWS(channel_priors(bpsk, y, w0, 0.0));
}

TEST_CASE("siso decoding examples")
{
	const auto spec = RunSpec::make(1, 2);
	MessageBlock priors(2, 2);
	priors[0][0] = 0.9;
	priors[0][1] = 0.1;
	priors[1][0] = 0.6;
	priors[1][1] = 0.4;
	const auto out = siso_decode(spec, priors);
	CHECK(out.app[0][0] == doctest::Approx(0.54 / 0.58).epsilon(1e-14));
	CHECK(out.app[0][0] == doctest::Approx(0.931).epsilon(1e-3));
	CHECK(out.extrinsic[0][0] == doctest::Approx(0.6).epsilon(1e-14));
	CHECK(out.extrinsic[1][0] == doctest::Approx(0.9).epsilon(1e-14));

	// uncoded symbols have a uniform extrinsic
	const auto un = RunSpec::make(1, 1);
	MessageBlock p1(1, 3);
	p1[0][0] = 0.7;
	p1[0][1] = 0.2;
	p1[0][2] = 0.1;
	const auto o1 = siso_decode(un, p1);
	for (int k = 0; k < 3; ++k)
		CHECK(o1.extrinsic[0][k] == doctest::Approx(1.0 / 3));
	CHECK(o1.app[0][0] == doctest::Approx(0.7));

	// uniform fixed point
	const auto ts = RunSpec::make(3, 8, 2);
	const auto o2 = siso_decode(ts, MessageBlock(ts.code_length(), 4));
	for (double x : o2.app.flat())
		CHECK(x == doctest::Approx(0.25));
	for (double x : o2.extrinsic.flat())
		CHECK(x == doctest::Approx(0.25));

	CHECK_THROWS(siso_decode(spec, MessageBlock(3, 2)));
}

TEST_CASE("siso consistency identity and normalization")
{
	auto rng = substream(5, Stream::test);
	const auto spec = RunSpec::make(3, 8, 3);
	const int q = 5;
	MessageBlock priors(spec.code_length(), q);
	for (std::size_t j = 0; j < priors.size(); ++j)
	{
		for (auto &x : priors[j])
			x = 0.01 + rng.uniform();
		normalize(priors[j]);
	}
	const auto out = siso_decode(spec, priors);
	for (std::size_t i = 0; i < spec.info_length(); ++i)
	{
		const auto [start, len] = spec.group(i);
		for (int l = 0; l < len; ++l)
		{
			std::vector<double> prod(q);
			for (int k = 0; k < q; ++k)
				prod[k] = out.extrinsic[start + l][k] * priors[start + l][k];
			normalize(prod);
			for (int k = 0; k < q; ++k)
				CHECK(prod[k] == doctest::Approx(out.app[i][k]).epsilon(1e-12));
		}
		CHECK(std::accumulate(out.app[i].begin(), out.app[i].end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
	}
}

TEST_CASE("siso matches brute-force marginalization")
{
	auto rng = substream(6, Stream::test);
	for (int trial = 0; trial < 200; ++trial)
	{
		const int q = 2 + static_cast<int>(rng.below(7));
		const int N = 1 + static_cast<int>(rng.below(5));
		const auto spec = RunSpec::make(1, N);
		MessageBlock priors(N, q);
		for (std::size_t j = 0; j < priors.size(); ++j)
		{
			for (auto &x : priors[j])
				x = rng.uniform() + 1e-3;
			normalize(priors[j]);
		}
		const auto out = siso_decode(spec, priors);
		const auto ref = oracle::repetition_marginals(priors, q, N);
		for (int j = 0; j < N; ++j)
			for (int k = 0; k < q; ++k)
				CHECK(out.extrinsic[j][k] == doctest::Approx(ref.extrinsic[j][k]).epsilon(1e-12));
		for (int k = 0; k < q; ++k)
			CHECK(out.app[0][k] == doctest::Approx(ref.app[k]).epsilon(1e-12));
	}
}

TEST_CASE("hard decision")
{
	CHECK(hard_decision(std::vector<double>{0.2, 0.5, 0.3}) == 1);
	CHECK(hard_decision(std::vector<double>{0.5, 0.5}) == 0);
	std::vector<double> ind(6);
	set_indicator(ind, 4);
	CHECK(hard_decision(ind) == 4);
}
