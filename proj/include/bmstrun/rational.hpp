#ifndef BMSTRUN_RATIONAL_HPP_
#define BMSTRUN_RATIONAL_HPP_

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bmstrun
{

/// Exact non-negative-denominator fraction, always stored in lowest terms.
class Rational
{
public:
	constexpr Rational() = default;
	Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den)
	{
		if (den_ == 0)
			throw std::invalid_argument("Rational: zero denominator");
		if (den_ < 0) { num_ = -num_; den_ = -den_; }
		const auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
		if (g > 1) { num_ /= g; den_ /= g; }
	}

	std::int64_t num() const { return num_; }
	std::int64_t den() const { return den_; }
	double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

	friend bool operator==(const Rational &a, const Rational &b) = default;
	friend bool operator<(const Rational &a, const Rational &b) { return a.num_ * b.den_ < b.num_ * a.den_; }

	std::string str() const
	{
		return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
	}

	friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

private:
	std::int64_t num_ = 0;
	std::int64_t den_ = 1;
};

}

#endif
