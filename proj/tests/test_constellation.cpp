#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bmstrun/constellation.hpp"

using namespace bmstrun;

TEST_CASE("builtin point sets and labelings")
{
	const auto bpsk = builtin("BPSK");
	CHECK(bpsk.q() == 2);
	CHECK(bpsk.map(0)[0] == 1.0);
	CHECK(bpsk.map(1)[0] == -1.0);

	const auto pam3 = builtin("3-PAM");
	std::vector<double> p3(pam3.points().begin(), pam3.points().end());
	std::sort(p3.begin(), p3.end());
	CHECK(p3 == std::vector<double>{-1.0, 0.0, 1.0});

	const auto pam4 = builtin("4-PAM");
	CHECK(pam4.map(0)[0] == -3.0);
	CHECK(pam4.map(1)[0] == -1.0);
	CHECK(pam4.map(2)[0] == 1.0);
	CHECK(pam4.map(3)[0] == 3.0);

	const auto pam16 = builtin("16-PAM-uniform");
	CHECK(pam16.q() == 16);
	CHECK(pam16.map(0)[0] == -15.0);
	CHECK(pam16.map(15)[0] == 15.0);

	CHECK_THROWS(builtin("7-PSK"));
}

TEST_CASE("every builtin labeling is a bijection")
{
	for (const auto &name : builtin_names())
	{
		const auto c = builtin(name);
		std::vector<int> sorted = c.label();
		std::sort(sorted.begin(), sorted.end());
		for (int i = 0; i < c.q(); ++i)
			CHECK(sorted[i] == i);
		CHECK(c.min_distance() > 0.0);
	}
}

TEST_CASE("8-PSK has constant norm and 16-QAM has three norms")
{
	const auto psk = builtin("8-PSK");
	CHECK(psk.dim() == 2);
	for (int u = 0; u < 8; ++u)
		CHECK(std::hypot(psk.map(u)[0], psk.map(u)[1]) == doctest::Approx(1.0).epsilon(1e-15));
	CHECK(psk.map(2)[1] == doctest::Approx(1.0));

	const auto qam = builtin("16-QAM");
	std::set<long> norms;
	for (int u = 0; u < 16; ++u)
		norms.insert(std::lround(qam.map(u)[0] * qam.map(u)[0] + qam.map(u)[1] * qam.map(u)[1]));
	CHECK(norms == std::set<long>{2, 10, 18});
	CHECK(qam.average_energy() == doctest::Approx(10.0));
}

TEST_CASE("sigma from SNR")
{
	CHECK(sigma_from_snr(builtin("BPSK"), 0.0).sigma == doctest::Approx(1.0).epsilon(1e-14));
	CHECK(sigma_from_snr(builtin("BPSK"), 10 * std::log10(4.0)).sigma == doctest::Approx(0.5).epsilon(1e-14));
	CHECK(sigma_from_snr(builtin("BPSK"), 6.0206).sigma == doctest::Approx(0.5).epsilon(1e-5));
	CHECK(sigma_from_snr(builtin("4-PAM"), 0.0).sigma == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
	// 16-QAM: energy 10 spread over two dimensions
	CHECK(sigma_from_snr(builtin("16-QAM"), 0.0).sigma == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("scaling the points scales sigma by the same factor")
{
	for (const auto &name : builtin_names())
	{
		const auto c = builtin(name);
		const auto k = c.scaled(3.5);
		for (double snr : {-3.0, 0.0, 7.5})
			CHECK(sigma_from_snr(k, snr).sigma == doctest::Approx(3.5 * sigma_from_snr(c, snr).sigma).epsilon(1e-13));
	}
}

TEST_CASE("constellation file round trip and validation")
{
	std::istringstream good("# bpsk\n2 1\n1\n-1\n0 1\n");
	CHECK(parse_constellation(good, "x") == builtin("BPSK"));

	std::istringstream bad_label("2 1\n1\n-1\n0 0\n");
	CHECK_THROWS(parse_constellation(bad_label, "x"));

	std::istringstream dup("2 1\n1\n1\n0 1\n");
	CHECK_THROWS(parse_constellation(dup, "x"));

	std::istringstream truncated("3 1\n1\n0\n");
	CHECK_THROWS(parse_constellation(truncated, "x"));

	std::istringstream bad_dim("2 3\n1 0 0\n0 1 0\n0 1\n");
	CHECK_THROWS(parse_constellation(bad_dim, "x"));
}

TEST_CASE("non-uniform 16-PAM from a file")
{
	const auto path = std::filesystem::temp_directory_path() / "bmstrun_nonuniform16.txt";
	{
		std::ofstream out(path);
		out << "16 1\n";
		double x = -20.0;
		for (int i = 0; i < 16; ++i)
		{
			out << x << "\n";
			x += 1.0 + 0.15 * std::abs(i - 7.5);
		}
		for (int i = 0; i < 16; ++i)
			out << i << (i < 15 ? " " : "\n");
	}
	const auto c = load_constellation(path);
	CHECK(c.q() == 16);
	CHECK(c.dim() == 1);
	CHECK(c.name() == "bmstrun_nonuniform16");
	CHECK(resolve_constellation(path.string()) == c);
	std::filesystem::remove(path);
}

TEST_CASE("relabeling permutes the map")
{
	const auto c = builtin("4-PAM").relabeled({3, 2, 1, 0});
	CHECK(c.map(0)[0] == 3.0);
	CHECK(c.map(3)[0] == -3.0);
	CHECK_THROWS(builtin("4-PAM").relabeled({0, 1, 1, 2}));
}
