#ifndef BMSTRUN_BMST_HPP_
#define BMSTRUN_BMST_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "bmstrun/channels.hpp"
#include "bmstrun/check_node.hpp"
#include "bmstrun/constellation.hpp"
#include "bmstrun/group.hpp"
#include "bmstrun/rational.hpp"
#include "bmstrun/runcode.hpp"

namespace bmstrun
{

/// What the decoder keeps for blocks that have left the window on the left.
enum class TrailingEdge
{
	decision_feedback, ///< re-encoded decisions enter the graph as indicator messages
	freeze_messages,   ///< the last soft messages are kept and no longer updated
};

struct BmstSpec
{
	RunSpec basic;
	int m = 0;                          ///< encoding memory
	std::uint64_t interleaver_seed = 1; ///< seeds make_interleavers
	int L = 20;                         ///< data blocks per frame; m zero blocks terminate it
	int d = 0;                          ///< decoding delay, conventionally 3m
	int max_iters = 18;
	double stop_tolerance = 1e-6; ///< early stop when no message moves more than this in an iteration
	TrailingEdge trailing = TrailingEdge::decision_feedback;
	CheckKernel kernel = CheckKernel::direct;

	std::size_t block_length() const { return basic.code_length(); }
	int frame_blocks() const { return L + m; }
};

/// Permutation used in gather form: w[j] = v[pi[j]].
using Permutation = std::vector<std::uint32_t>;

/// m Fisher-Yates permutations of {0..n-1}; permutation i (1-based) comes from
/// xoshiro256** substream (seed, interleaver, i). Integer-only, so identical on every platform.
std::vector<Permutation> make_interleavers(std::uint64_t seed, int m, std::size_t n);

/// L P / ((L + m) Q).
Rational effective_rate(const BmstSpec &spec);

struct EncodedFrame
{
	std::vector<GroupVector> v; ///< basic codewords, L + m blocks (termination blocks are zero)
	std::vector<GroupVector> c; ///< transmitted sub-codewords, L + m blocks
};

/// c(t) = v(t) + w(t,1) + ... + w(t,m), with w(t,i)[j] = v(t-i)[pi_i[j]] and v(t) = 0 outside [0, L).
EncodedFrame bmst_encode_frame(const BmstSpec &spec, const std::vector<Permutation> &interleavers,
                               const std::vector<GroupVector> &u_blocks);

std::vector<GroupVector> bmst_encode(const BmstSpec &spec, const std::vector<Permutation> &interleavers,
                                     const std::vector<GroupVector> &u_blocks);

/// Variable node: output j is the normalized product of all inputs except j.
std::vector<ProbMessage> node_equal(const std::vector<ProbMessage> &incoming);

/// Check node for sum = addend_1 + ... + addend_k (mod q). incoming[0] is the sum edge.
std::vector<ProbMessage> node_add(const std::vector<ProbMessage> &incoming, int q,
                                  CheckKernel kernel = CheckKernel::direct);

struct TraceEvent
{
	int target = 0;    ///< block being decided
	int iteration = 0; ///< 1-based
	double max_change = 0.0;
	std::vector<int> layer_times;
	std::vector<double> layer_entropy; ///< mean entropy (bits) of the messages into each RUN node
};

using TraceSink = std::function<void(const TraceEvent &)>;

/// Sliding-window decoder over the normal graph of a BMST-RUN code.
///
/// The graph per time slot t has a RUN node (u(t) - v(t)), an "=" node fanning v(t)
/// out to the "+" node of slot t and through pi_i to the "+" nodes of slots t+i,
/// and a "+" node tying c(t) to its m+1 addends. A decoder instance owns mutable
/// window state and is not thread safe; use one per worker.
class SlidingWindowDecoder
{
public:
	SlidingWindowDecoder(BmstSpec spec, LabeledConstellation constellation, std::vector<Permutation> interleavers);
	~SlidingWindowDecoder();
	SlidingWindowDecoder(SlidingWindowDecoder &&) noexcept;
	SlidingWindowDecoder &operator=(SlidingWindowDecoder &&) noexcept;

	void set_trace(TraceSink sink);

	/// rx and dithers hold L + m blocks. Returns the L decided information blocks.
	std::vector<GroupVector> decode(const std::vector<ChannelRealization> &rx, const std::vector<GroupVector> &dithers);

	/// Iterations spent per decided block in the last decode call.
	const std::vector<int> &iterations() const;

private:
	struct Impl;
	std::unique_ptr<Impl> impl_;
};

std::vector<GroupVector> swd_decode(const BmstSpec &spec, const LabeledConstellation &c,
                                    const std::vector<Permutation> &interleavers,
                                    const std::vector<ChannelRealization> &rx, const std::vector<GroupVector> &dithers);

}

#endif
