#ifndef BMSTRUN_RUNCODE_HPP_
#define BMSTRUN_RUNCODE_HPP_

#include <span>
#include <utility>

#include "bmstrun/constellation.hpp"
#include "bmstrun/group.hpp"
#include "bmstrun/rational.hpp"

namespace bmstrun
{

/// Unique (N, alpha) with 1/(N+1) < P/Q <= 1/N and alpha = Q/P - N.
std::pair<int, Rational> time_sharing_params(int P, int Q);

/// B-fold Cartesian product of the time-shared RUN code C_RUN[Q, P].
///
/// Within one fold the first alpha*P information symbols are repeated N+1 times,
/// the remaining (1-alpha)*P symbols N times. Fold b occupies coded positions
/// [b*Q, (b+1)*Q) and information positions [b*P, (b+1)*P).
struct RunSpec
{
	int P = 1;
	int Q = 1;
	int N = 1;
	Rational alpha{0};
	int B = 1;

	static RunSpec make(int P, int Q, int B = 1);

	int long_groups() const { return Q - N * P; }       ///< alpha * P
	int short_groups() const { return (N + 1) * P - Q; } ///< (1 - alpha) * P
	std::size_t info_length() const { return static_cast<std::size_t>(P) * B; }
	std::size_t code_length() const { return static_cast<std::size_t>(Q) * B; }

	/// First coded position and repetition count of information symbol i (0 <= i < P*B).
	std::pair<std::size_t, int> group(std::size_t i) const
	{
		const std::size_t fold = i / P;
		const int k = static_cast<int>(i % P);
		const int lg = long_groups();
		const std::size_t base = fold * Q;
		if (k < lg)
			return {base + static_cast<std::size_t>(k) * (N + 1), N + 1};
		return {base + static_cast<std::size_t>(lg) * (N + 1) + static_cast<std::size_t>(k - lg) * N, N};
	}
};

GroupVector run_encode(const RunSpec &spec, const GroupVector &u);

/// P(v) proportional to exp(-||y_j - phi(v + w_j)||^2 / (2 sigma^2)); y holds dim values per symbol.
MessageBlock channel_priors(const LabeledConstellation &c, std::span<const double> y, const GroupVector &w,
                            double sigma);

struct SisoOutput
{
	MessageBlock app;       ///< one message per information symbol
	MessageBlock extrinsic; ///< one message per coded symbol
};

SisoOutput siso_decode(const RunSpec &spec, const MessageBlock &priors);

/// In-place kernel behind siso_decode. app and extrinsic may be empty spans to skip them.
/// scratch must hold at least q doubles.
void siso_decode_into(const RunSpec &spec, int q, std::span<const double> priors, std::span<double> app,
                      std::span<double> extrinsic, std::span<double> scratch);

}

#endif
