#ifndef BMSTRUN_GROUP_HPP_
#define BMSTRUN_GROUP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace bmstrun
{

using Symbol = std::int32_t;

/// Sequence over the modulo-q group M = {0, ..., q-1}.
class GroupVector
{
public:
	GroupVector() = default;
	GroupVector(int q, std::size_t n) : q_(q), symbols_(n, 0) {}
	GroupVector(int q, std::initializer_list<Symbol> symbols) : GroupVector(q, std::vector<Symbol>(symbols)) {}
	GroupVector(int q, std::vector<Symbol> symbols) : q_(q), symbols_(std::move(symbols))
	{
		for (Symbol s : symbols_)
			if (s < 0 || s >= q_)
				throw std::invalid_argument("GroupVector: symbol outside [0, q)");
	}

	int q() const { return q_; }
	std::size_t size() const { return symbols_.size(); }
	Symbol operator[](std::size_t i) const { return symbols_[i]; }
	Symbol &operator[](std::size_t i) { return symbols_[i]; }
	std::span<const Symbol> symbols() const { return symbols_; }
	std::span<Symbol> symbols() { return symbols_; }

	friend bool operator==(const GroupVector &, const GroupVector &) = default;

private:
	int q_ = 2;
	std::vector<Symbol> symbols_;
};

/// Element-wise (v + w) mod q.
GroupVector apply_dither(const GroupVector &v, const GroupVector &w);
/// Group inverse, element-wise (q - w) mod q.
GroupVector negate(const GroupVector &w);

/// Smallest probability kept after normalization; exact zeros would poison log-domain products.
inline constexpr double kProbFloor = 1e-300;

/// Probability vector of length q.
using ProbMessage = std::vector<double>;

/// n messages of length q stored contiguously (message j occupies [j*q, (j+1)*q)).
class MessageBlock
{
public:
	MessageBlock() = default;
	MessageBlock(std::size_t n, int q) : n_(n), q_(q), data_(n * q, 1.0 / q) {}

	std::size_t size() const { return n_; }
	int q() const { return q_; }

	std::span<double> operator[](std::size_t j) { return {data_.data() + j * q_, static_cast<std::size_t>(q_)}; }
	std::span<const double> operator[](std::size_t j) const
	{
		return {data_.data() + j * q_, static_cast<std::size_t>(q_)};
	}

	std::span<double> flat() { return data_; }
	std::span<const double> flat() const { return data_; }

	void fill_uniform() { std::fill(data_.begin(), data_.end(), 1.0 / q_); }

	ProbMessage message(std::size_t j) const
	{
		auto m = (*this)[j];
		return {m.begin(), m.end()};
	}

private:
	std::size_t n_ = 0;
	int q_ = 2;
	std::vector<double> data_;
};

/// Scales to unit sum and floors tiny entries at kProbFloor.
inline void normalize(std::span<double> p)
{
	double sum = 0.0;
	for (double x : p)
		sum += x;
	if (!(sum > 0.0) || !std::isfinite(sum))
	{
		std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
		return;
	}
	const double inv = 1.0 / sum;
	for (double &x : p)
		x = std::max(x * inv, kProbFloor);
}

/// Turns unnormalized log-probabilities into a normalized message (max subtraction, exp, normalize).
inline void normalize_from_log(std::span<const double> logp, std::span<double> out)
{
	double mx = logp[0];
	for (double x : logp)
		mx = std::max(mx, x);
	for (std::size_t k = 0; k < logp.size(); ++k)
		out[k] = std::exp(logp[k] - mx);
	normalize(out);
}

/// Argmax with ties broken toward the smallest index.
inline Symbol hard_decision(std::span<const double> app)
{
	Symbol best = 0;
	for (std::size_t k = 1; k < app.size(); ++k)
		if (app[k] > app[best])
			best = static_cast<Symbol>(k);
	return best;
}

inline void set_indicator(std::span<double> p, Symbol s)
{
	std::fill(p.begin(), p.end(), kProbFloor);
	p[s] = 1.0;
}

}

#endif
