#include "bmstrun/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bmstrun/error.hpp"

namespace bmstrun
{

EdefPolynomial EdefPolynomial::from_unsorted(std::vector<Term> terms)
{
	std::sort(terms.begin(), terms.end(), [](const Term &a, const Term &b) { return a.dist2 < b.dist2; });
	EdefPolynomial p;
	for (const auto &t : terms)
	{
		if (!p.terms_.empty() && t.dist2 - p.terms_.back().dist2 <= kMergeTolerance)
			p.terms_.back().mult += t.mult;
		else
			p.terms_.push_back(t);
	}
	return p;
}

void EdefPolynomial::add(double dist2, double mult)
{
	auto it = std::lower_bound(terms_.begin(), terms_.end(), dist2 - kMergeTolerance,
	                           [](const Term &t, double key) { return t.dist2 < key; });
	if (it != terms_.end() && std::abs(it->dist2 - dist2) <= kMergeTolerance)
		it->mult += mult;
	else
		terms_.insert(it, Term{dist2, mult});
}

double EdefPolynomial::coefficient(double dist2) const
{
	for (const auto &t : terms_)
		if (std::abs(t.dist2 - dist2) <= kMergeTolerance)
			return t.mult;
	return 0.0;
}

double EdefPolynomial::total_mass() const
{
	double s = 0.0;
	for (const auto &t : terms_)
		s += t.mult;
	return s;
}

EdefPolynomial EdefPolynomial::operator*(const EdefPolynomial &other) const
{
	std::vector<Term> prod;
	prod.reserve(terms_.size() * other.terms_.size());
	for (const auto &a : terms_)
		for (const auto &b : other.terms_)
			prod.push_back({a.dist2 + b.dist2, a.mult * b.mult});
	return from_unsorted(std::move(prod));
}

EdefPolynomial EdefPolynomial::operator+(const EdefPolynomial &other) const
{
	std::vector<Term> all = terms_;
	all.insert(all.end(), other.terms_.begin(), other.terms_.end());
	return from_unsorted(std::move(all));
}

EdefPolynomial EdefPolynomial::pow(int n) const
{
	if (n < 0)
		throw std::invalid_argument("EdefPolynomial::pow: negative exponent");
	EdefPolynomial result;
	result.terms_.push_back({0.0, 1.0});
	EdefPolynomial base = *this;
	while (n > 0)
	{
		if (n & 1)
			result = result * base;
		n >>= 1;
		if (n > 0)
			base = base * base;
	}
	return result;
}

EdefPolynomial edef_single(const LabeledConstellation &c, Symbol e)
{
	const int q = c.q();
	if (e < 0 || e >= q)
		throw std::invalid_argument("edef_single: error symbol outside [0, q)");
	EdefPolynomial d;
	for (int w = 0; w < q; ++w)
	{
		const auto a = c.map(w);
		const auto b = c.map((e + w) % q);
		double d2 = 0.0;
		for (int k = 0; k < c.dim(); ++k)
			d2 += (a[k] - b[k]) * (a[k] - b[k]);
		d.add(d2, 1.0 / q);
	}
	return d;
}

EdefPolynomial edef_power(const LabeledConstellation &c, int N)
{
	if (N < 1)
		throw std::invalid_argument("edef_power: N must be at least 1");
	EdefPolynomial sum;
	for (int e = 0; e < c.q(); ++e)
		sum = sum + edef_single(c, e).pow(N);
	return sum;
}

double q_function(double x)
{
	return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double union_bound_from(const EdefPolynomial &edef, double sigma)
{
	double bound = 0.0;
	for (const auto &t : edef.terms())
		if (t.dist2 > EdefPolynomial::kMergeTolerance)
			bound += t.mult * q_function(std::sqrt(t.dist2) / (2.0 * sigma));
	return bound;
}

double union_bound_rep(const LabeledConstellation &c, int N, double snr_db)
{
	return union_bound_from(edef_power(c, N), sigma_from_snr(c, snr_db).sigma);
}

double run_ser_bound(const LabeledConstellation &c, int N, const Rational &alpha, double snr_db)
{
	return genie_bound(c, N, alpha, 0, snr_db);
}

double genie_bound(const LabeledConstellation &c, int N, const Rational &alpha, int m, double snr_db)
{
	if (m < 0)
		throw std::invalid_argument("genie_bound: memory must be nonnegative");
	const double a = alpha.to_double();
	if (a < 0.0 || a >= 1.0)
		throw std::invalid_argument("genie_bound: alpha must lie in [0, 1)");
	const double sigma = sigma_from_snr(c, snr_db).sigma;
	double value = 0.0;
	if (a > 0.0)
		value += a * union_bound_from(edef_power(c, (N + 1) * (m + 1)), sigma);
	value += (1.0 - a) * union_bound_from(edef_power(c, N * (m + 1)), sigma);
	return value;
}

int select_memory(const LabeledConstellation &c, int N, const Rational &alpha, double gamma_lim_db, double p_target,
                  int cap)
{
	if (!(p_target > 0.0 && p_target < 1.0))
		throw std::invalid_argument("select_memory: p_target must lie in (0, 1)");
	for (int m = 0; m <= cap; ++m)
		if (genie_bound(c, N, alpha, m, gamma_lim_db) <= p_target)
			return m;
	throw RuntimeFailure("select_memory: no memory up to " + std::to_string(cap) +
	                     " reaches the target SER at the Shannon limit");
}

int binary_memory_rule(double gamma_target_db, double gamma_lim_db)
{
	const double x = std::pow(10.0, (gamma_target_db - gamma_lim_db) / 10.0) - 1.0;
	if (x <= 0.0)
		return 0;
	return static_cast<int>(std::ceil(x - 1e-12));
}

double snr_at_level(const std::function<double(double)> &f, double level, double lo_db, double hi_db, double tol_db)
{
	if (f(lo_db) < level || f(hi_db) > level)
		throw RuntimeFailure("snr_at_level: level not bracketed");
	while (hi_db - lo_db > tol_db)
	{
		const double mid = 0.5 * (lo_db + hi_db);
		if (f(mid) > level)
			lo_db = mid;
		else
			hi_db = mid;
	}
	return 0.5 * (lo_db + hi_db);
}

}
