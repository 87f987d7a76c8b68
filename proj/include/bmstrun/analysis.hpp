#ifndef BMSTRUN_ANALYSIS_HPP_
#define BMSTRUN_ANALYSIS_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "bmstrun/constellation.hpp"
#include "bmstrun/group.hpp"
#include "bmstrun/rational.hpp"

namespace bmstrun
{

/// Sparse polynomial in a dummy variable X whose exponents are squared Euclidean
/// distances. Exponents within kMergeTolerance of each other are one term.
class EdefPolynomial
{
public:
	static constexpr double kMergeTolerance = 1e-9;

	struct Term
	{
		double dist2;
		double mult;
	};

	EdefPolynomial() = default;

	/// Adds mult * X^dist2, merging with an existing exponent when within tolerance.
	void add(double dist2, double mult);

	/// Terms sorted by exponent.
	const std::vector<Term> &terms() const { return terms_; }

	/// Coefficient of X^dist2 (0 when absent).
	double coefficient(double dist2) const;
	double total_mass() const;

	EdefPolynomial operator*(const EdefPolynomial &other) const;
	EdefPolynomial operator+(const EdefPolynomial &other) const;
	EdefPolynomial pow(int n) const;

private:
	static EdefPolynomial from_unsorted(std::vector<Term> terms);

	std::vector<Term> terms_;
};

/// D_e(X) = (1/q) sum_w X^{||phi(w) - phi(e + w)||^2}.
EdefPolynomial edef_single(const LabeledConstellation &c, Symbol e);

/// B^(N)(X) = sum_e D_e(X)^N.
EdefPolynomial edef_power(const LabeledConstellation &c, int N);

/// Gaussian tail probability, Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

/// sum_{delta > 0} B_delta^(N) Q(delta / (2 sigma)) for the repetition code C[N,1].
double union_bound_rep(const LabeledConstellation &c, int N, double snr_db);
double union_bound_from(const EdefPolynomial &edef, double sigma);

/// alpha * f_{N+1} + (1 - alpha) * f_N with each f bounded by union_bound_rep.
double run_ser_bound(const LabeledConstellation &c, int N, const Rational &alpha, double snr_db);

/// Genie-aided lower bound of a memory-m BMST-RUN code: repetition factors scale by (m+1).
double genie_bound(const LabeledConstellation &c, int N, const Rational &alpha, int m, double snr_db);

inline constexpr int kDefaultMemoryCap = 64;

/// Smallest m with genie_bound(..., m, gamma_lim) <= p_target. Throws RuntimeFailure past the cap.
int select_memory(const LabeledConstellation &c, int N, const Rational &alpha, double gamma_lim_db, double p_target,
                  int cap = kDefaultMemoryCap);

/// m = ceil(10^((target - lim)/10) - 1), clamped to 0 for negative gaps.
int binary_memory_rule(double gamma_target_db, double gamma_lim_db);

/// SNR (dB) in [lo, hi] where a decreasing function of SNR crosses level, by bisection.
double snr_at_level(const std::function<double(double)> &f, double level, double lo_db, double hi_db,
                    double tol_db = 1e-6);

}

#endif
