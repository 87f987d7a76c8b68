#ifndef BMSTRUN_CHECK_NODE_HPP_
#define BMSTRUN_CHECK_NODE_HPP_

#include <complex>
#include <span>
#include <vector>

namespace bmstrun
{

enum class CheckKernel
{
	direct,    ///< pairwise cyclic convolutions, O(q^2) each
	transform, ///< length-q Fourier transform over Z_q, products in the transform domain
};

/// out(a) = sum_b x(b) y(a - b mod q).
void cyclic_convolve(std::span<const double> x, std::span<const double> y, std::span<double> out);

/// Message passing at a constraint x_0 + x_1 + ... + x_{k-1} = 0 (mod q).
///
/// in and out hold k messages of length q back to back. Output i is the
/// distribution of x_i implied by all other inputs. Outputs are normalized and
/// floored. A workspace is reused across calls; one per thread.
class ZeroSumCheck
{
public:
	ZeroSumCheck(int q, CheckKernel kernel);

	int q() const { return q_; }
	CheckKernel kernel() const { return kernel_; }

	void run(int k, std::span<const double> in, std::span<double> out);

private:
	void run_direct(int k, std::span<const double> in, std::span<double> out);
	void run_transform(int k, std::span<const double> in, std::span<double> out);

	int q_;
	CheckKernel kernel_;
	std::vector<double> fwd_, bwd_, tmp_;
	std::vector<std::complex<double>> twiddle_, spec_, cfwd_, cbwd_, cprod_;
};

}

#endif
