#include "doctest.h"

#include "bmstrun/bmst.hpp"
#include "bmstrun/check_node.hpp"
#include "bmstrun/rng.hpp"
#include "oracles.hpp"

using namespace bmstrun;

namespace
{

ProbMessage random_message(int q, Xoshiro256 &rng)
{
	ProbMessage p(q);
	for (auto &x : p)
		x = rng.uniform() + 1e-6;
	normalize(p);
	return p;
}

}

TEST_CASE("cyclic convolution")
{
	const std::vector<double> x{0.5, 0.3, 0.2}, y{0.6, 0.2, 0.2};
	std::vector<double> out(3);
	cyclic_convolve(x, y, out);
	CHECK(out[0] == doctest::Approx(0.40).epsilon(1e-14));
	CHECK(out[1] == doctest::Approx(0.32).epsilon(1e-14));
	CHECK(out[2] == doctest::Approx(0.28).epsilon(1e-14));
	const auto ref = oracle::convolve(x, y);
	for (int k = 0; k < 3; ++k)
		CHECK(out[k] == doctest::Approx(ref[k]));
}

TEST_CASE("node_add: sum edge is the convolution of the addends")
{
	for (auto kernel : {CheckKernel::direct, CheckKernel::transform})
	{
		const ProbMessage u(3, 1.0 / 3);
		const auto out = node_add({u, {0.5, 0.3, 0.2}, {0.6, 0.2, 0.2}}, 3, kernel);
		CHECK(out[0][0] == doctest::Approx(0.40).epsilon(1e-12));
		CHECK(out[0][1] == doctest::Approx(0.32).epsilon(1e-12));
		CHECK(out[0][2] == doctest::Approx(0.28).epsilon(1e-12));
	}
}

TEST_CASE("node_add: indicators and uniform inputs")
{
	for (auto kernel : {CheckKernel::direct, CheckKernel::transform})
	{
		ProbMessage sum(4), a(4), b(4, 0.25);
		set_indicator(sum, 3);
		set_indicator(a, 1);
		const auto out = node_add({sum, a, b}, 4, kernel);
		CHECK(hard_decision(out[2]) == 2);
		CHECK(out[2][2] == doctest::Approx(1.0));

		const ProbMessage uni(5, 0.2);
		for (const auto &m : node_add({uni, uni, uni, uni}, 5, kernel))
			for (double x : m)
				CHECK(x == doctest::Approx(0.2));
	}
}

TEST_CASE("node_add: addend output correlates the sum edge with the other addends")
{
	auto rng = substream(11, Stream::test);
	const int q = 5;
	const auto s = random_message(q, rng), a = random_message(q, rng), b = random_message(q, rng);
	const auto out = node_add({s, a, b}, q);
	// P(x_b = v) ∝ sum_{x_a} a(x_a) s(x_a + v)
	ProbMessage ref(q, 0.0);
	for (int v = 0; v < q; ++v)
		for (int xa = 0; xa < q; ++xa)
			ref[v] += a[xa] * s[(xa + v) % q];
	oracle::normalize_in_place(ref);
	for (int v = 0; v < q; ++v)
		CHECK(out[2][v] == doctest::Approx(ref[v]).epsilon(1e-12));
}

TEST_CASE("node_add: direct and transform kernels agree")
{
	auto rng = substream(12, Stream::test);
	for (int trial = 0; trial < 300; ++trial)
	{
		const int q = 2 + static_cast<int>(rng.below(15));
		const int addends = 1 + static_cast<int>(rng.below(4));
		std::vector<ProbMessage> in;
		for (int i = 0; i <= addends; ++i)
			in.push_back(random_message(q, rng));
		const auto d = node_add(in, q, CheckKernel::direct);
		const auto t = node_add(in, q, CheckKernel::transform);
		for (std::size_t i = 0; i < d.size(); ++i)
			for (int k = 0; k < q; ++k)
				CHECK(std::abs(d[i][k] - t[i][k]) <= 1e-12);
	}
}

TEST_CASE("node_equal")
{
	const auto two = node_equal({{0.7, 0.3}, {0.1, 0.9}});
	CHECK(two[0][0] == doctest::Approx(0.1));
	CHECK(two[1][0] == doctest::Approx(0.7));

	const auto three = node_equal({{0.8, 0.2}, {0.6, 0.4}, {0.5, 0.5}});
	CHECK(three[2][0] == doctest::Approx(0.48 / 0.56).epsilon(1e-14));
	CHECK(three[2][0] == doctest::Approx(0.857).epsilon(1e-3));

	ProbMessage ind(4);
	set_indicator(ind, 2);
	const auto absorbed = node_equal({ind, {0.1, 0.2, 0.3, 0.4}, {0.4, 0.3, 0.2, 0.1}});
	CHECK(hard_decision(absorbed[1]) == 2);
	CHECK(absorbed[1][2] == doctest::Approx(1.0));
	CHECK(absorbed[2][2] == doctest::Approx(1.0));
}
