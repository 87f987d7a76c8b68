#include "doctest.h"

#include <cmath>

#include "bmstrun/analysis.hpp"
#include "bmstrun/error.hpp"
#include "oracles.hpp"

using namespace bmstrun;

TEST_CASE("single-error EDEF")
{
	for (const auto &name : builtin_names())
	{
		const auto c = builtin(name);
		const auto d0 = edef_single(c, 0);
		REQUIRE(d0.terms().size() == 1);
		CHECK(d0.terms()[0].dist2 == 0.0);
		CHECK(d0.terms()[0].mult == doctest::Approx(1.0));
		for (int e = 0; e < c.q(); ++e)
			CHECK(edef_single(c, e).total_mass() == doctest::Approx(1.0).epsilon(1e-14));
	}
	const auto b = edef_single(builtin("BPSK"), 1);
	REQUIRE(b.terms().size() == 1);
	CHECK(b.coefficient(4.0) == doctest::Approx(1.0));

	const auto p = edef_single(builtin("4-PAM"), 2);
	REQUIRE(p.terms().size() == 1);
	CHECK(p.coefficient(16.0) == doctest::Approx(1.0));
}

TEST_CASE("EDEF powers")
{
	const auto bpsk = builtin("BPSK");
	const auto b1 = edef_power(bpsk, 1);
	REQUIRE(b1.terms().size() == 2);
	CHECK(b1.coefficient(0.0) == doctest::Approx(1.0));
	CHECK(b1.coefficient(4.0) == doctest::Approx(1.0));

	const auto b3 = edef_power(bpsk, 3);
	REQUIRE(b3.terms().size() == 2);
	CHECK(b3.coefficient(12.0) == doctest::Approx(1.0));

	for (const auto &name : builtin_names())
	{
		const auto c = builtin(name);
		for (int N : {1, 2, 5})
		{
			const auto bn = edef_power(c, N);
			CHECK(bn.total_mass() == doctest::Approx(c.q()).epsilon(1e-12));
			CHECK(bn.coefficient(0.0) == doctest::Approx(1.0).epsilon(1e-12));
		}
	}
	// 8-PSK distances are irrational; the merge tolerance keeps one term per distance
	CHECK(edef_power(builtin("8-PSK"), 1).terms().size() == 5);
}

TEST_CASE("EDEF powers match enumeration")
{
	for (const char *name : {"BPSK", "3-PAM", "4-PAM"})
	{
		const auto c = builtin(name);
		for (int N = 1; N <= 3; ++N)
		{
			const auto ref = oracle::edef_enumerate(c, N);
			const auto got = edef_power(c, N);
			CHECK(got.terms().size() == ref.size());
			for (const auto &[key, mult] : ref)
				CHECK(got.coefficient(static_cast<double>(key) * 1e-6) == doctest::Approx(mult).epsilon(1e-12));
		}
	}
	// a relabeled 4-PAM changes the spectrum; the enumeration must still agree
	const auto c = builtin("4-PAM").relabeled({0, 2, 1, 3});
	const auto ref = oracle::edef_enumerate(c, 2);
	const auto got = edef_power(c, 2);
	for (const auto &[key, mult] : ref)
		CHECK(got.coefficient(static_cast<double>(key) * 1e-6) == doctest::Approx(mult).epsilon(1e-12));
}

TEST_CASE("polynomial arithmetic")
{
	EdefPolynomial a;
	a.add(1.0, 2.0);
	a.add(1.0 + 1e-12, 1.0);
	a.add(0.0, 1.0);
	CHECK(a.terms().size() == 2);
	CHECK(a.coefficient(1.0) == 3.0);
	const auto sq = a * a;
	CHECK(sq.coefficient(0.0) == 1.0);
	CHECK(sq.coefficient(1.0) == 6.0);
	CHECK(sq.coefficient(2.0) == 9.0);
	const auto p3 = a.pow(3);
	const auto m3 = a * a * a;
	REQUIRE(p3.terms().size() == m3.terms().size());
	for (std::size_t i = 0; i < p3.terms().size(); ++i)
		CHECK(p3.terms()[i].mult == m3.terms()[i].mult);
	CHECK((a + a).coefficient(1.0) == 6.0);
	CHECK(a.pow(0).coefficient(0.0) == 1.0);
}

TEST_CASE("union bound for BPSK is Q(sqrt(N snr))")
{
	const auto bpsk = builtin("BPSK");
	CHECK(union_bound_rep(bpsk, 1, 10 * std::log10(4.0)) == doctest::Approx(0.022750131948179).epsilon(1e-12));
	for (int N = 1; N <= 16; ++N)
		for (double snr_db : {-5.0, 0.0, 3.0, 7.0})
		{
			const double ref = oracle::gaussian_tail(std::sqrt(N * db_to_linear(snr_db)));
			CHECK(union_bound_rep(bpsk, N, snr_db) == doctest::Approx(ref).epsilon(1e-12));
		}
}

TEST_CASE("union bound decays with SNR")
{
	for (const auto &name : builtin_names())
	{
		const auto c = builtin(name);
		double prev = 1e300;
		for (double snr = -10; snr <= 40; snr += 2.5)
		{
			const double b = union_bound_rep(c, 2, snr);
			CHECK(b <= prev);
			prev = b;
		}
		CHECK(prev < 1e-30);
	}
}

TEST_CASE("time-sharing bound")
{
	const auto bpsk = builtin("BPSK");
	for (double snr_db : {0.0, 2.0, 5.0})
	{
		const double s = db_to_linear(snr_db);
		CHECK(run_ser_bound(bpsk, 3, Rational(0), snr_db) == union_bound_rep(bpsk, 3, snr_db));
		const double half = 0.5 * (oracle::gaussian_tail(std::sqrt(2 * s)) + oracle::gaussian_tail(std::sqrt(s)));
		CHECK(run_ser_bound(bpsk, 1, Rational(1, 2), snr_db) == doctest::Approx(half).epsilon(1e-13));
		CHECK(run_ser_bound(bpsk, 1, Rational(99, 100), snr_db) <= run_ser_bound(bpsk, 1, Rational(0), snr_db));
	}
}

TEST_CASE("genie bound")
{
	const auto bpsk = builtin("BPSK");
	for (double snr_db : {-2.0, 1.0, 4.0})
	{
		const double s = db_to_linear(snr_db);
		CHECK(genie_bound(bpsk, 2, Rational(1, 3), 0, snr_db) == run_ser_bound(bpsk, 2, Rational(1, 3), snr_db));
		CHECK(genie_bound(bpsk, 1, Rational(0), 1, snr_db) ==
		      doctest::Approx(oracle::gaussian_tail(std::sqrt(2 * s))).epsilon(1e-13));
	}
	for (const auto &name : builtin_names())
	{
		const auto c = builtin(name);
		for (double snr = -5; snr <= 20; snr += 1.0)
		{
			double prev = run_ser_bound(c, 1, Rational(1, 3), snr);
			for (int m = 0; m <= 12; ++m)
			{
				const double g = genie_bound(c, 1, Rational(1, 3), m, snr);
				CHECK(g <= prev * (1 + 1e-12));
				prev = g;
			}
		}
	}
	CHECK_THROWS(genie_bound(bpsk, 1, Rational(1), 0, 0.0));
	CHECK_THROWS(genie_bound(bpsk, 1, Rational(0), -1, 0.0));
}

TEST_CASE("memory selection")
{
	const auto bpsk = builtin("BPSK");
	CHECK(select_memory(bpsk, 2, Rational(0), 0.2, 1e-5) == 8);
	CHECK(select_memory(bpsk, 1, Rational(1, 7), 5.3, 1e-5) == 5);
	CHECK(select_memory(bpsk, 1, Rational(0), 10.0, 0.5) == 0);

	int prev = 0;
	for (double p : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8})
	{
		const int m = select_memory(bpsk, 1, Rational(1, 3), 3.4, p);
		CHECK(m >= prev);
		prev = m;
	}
	CHECK_THROWS_AS(select_memory(bpsk, 1, Rational(0), -15.0, 1e-12, 8), RuntimeFailure);
	CHECK_THROWS(select_memory(bpsk, 1, Rational(0), 0.0, 1.5));
}

TEST_CASE("binary memory rule")
{
	CHECK(binary_memory_rule(5.0, 5.0) == 0);
	CHECK(binary_memory_rule(10.0, 0.0) == 9);
	CHECK(binary_memory_rule(4.8, 0.0) == 3);
	CHECK(binary_memory_rule(-1.0, 2.0) == 0);
}

TEST_CASE("level crossing")
{
	const auto bpsk = builtin("BPSK");
	const double x = snr_at_level([&](double s) { return union_bound_rep(bpsk, 1, s); }, 1e-4, -10, 30);
	CHECK(oracle::gaussian_tail(std::sqrt(db_to_linear(x))) == doctest::Approx(1e-4).epsilon(1e-5));
	CHECK_THROWS(snr_at_level([&](double s) { return union_bound_rep(bpsk, 1, s); }, 0.9, -10, 30));
}
