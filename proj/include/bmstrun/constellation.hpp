#ifndef BMSTRUN_CONSTELLATION_HPP_
#define BMSTRUN_CONSTELLATION_HPP_

#include <cmath>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace bmstrun
{

/// q signal points in R^dim together with a bijective labeling phi: {0..q-1} -> points.
///
/// Points are kept in their raw units (integers for PAM/QAM, unit circle for PSK);
/// every SNR-dependent quantity normalizes by the average energy, so the scale of
/// the point set never matters.
class LabeledConstellation
{
public:
	/// Validates the invariants: dim in {1,2}, label is a permutation, points distinct.
	LabeledConstellation(std::string name, int q, int dim, std::vector<double> points, std::vector<int> label);

	const std::string &name() const { return name_; }
	int q() const { return q_; }
	int dim() const { return dim_; }

	/// Raw point set in file order, q * dim values.
	std::span<const double> points() const { return points_; }
	const std::vector<int> &label() const { return label_; }

	/// phi(u), i.e. points[label[u]].
	std::span<const double> map(int u) const
	{
		return {mapped_.data() + static_cast<std::size_t>(u) * dim_, static_cast<std::size_t>(dim_)};
	}

	/// phi laid out symbol-major: mapped()[u * dim + k].
	std::span<const double> mapped() const { return mapped_; }

	/// (1/q) sum ||s||^2.
	double average_energy() const;
	double min_distance() const;

	LabeledConstellation scaled(double k) const;
	LabeledConstellation relabeled(std::vector<int> label) const;

	friend bool operator==(const LabeledConstellation &a, const LabeledConstellation &b)
	{
		return a.q_ == b.q_ && a.dim_ == b.dim_ && a.points_ == b.points_ && a.label_ == b.label_;
	}

private:
	std::string name_;
	int q_;
	int dim_;
	std::vector<double> points_;
	std::vector<int> label_;
	std::vector<double> mapped_;
};

/// Built-in signal sets with natural labelings:
/// BPSK (0 -> +1, 1 -> -1), 3-PAM {-1,0,1}, 4-PAM, 16-PAM-uniform (u -> 2u-(M-1)),
/// 8-PSK (u -> angle 2 pi u / 8), 16-QAM (row-major over {-3,-1,1,3}^2).
LabeledConstellation builtin(const std::string &name);
std::vector<std::string> builtin_names();

/// Text format: "q dim", q lines of coordinates, one line of q labels; '#' starts a comment.
LabeledConstellation load_constellation(const std::filesystem::path &path);
LabeledConstellation parse_constellation(std::istream &in, const std::string &name);

/// Builtin name or file path.
LabeledConstellation resolve_constellation(const std::string &name_or_path);

struct NoiseScale
{
	double snr_db;
	double sigma; ///< per-dimension noise standard deviation, in point units
};

/// SNR = sum ||s||^2 / (dim * sigma^2 * q).
NoiseScale sigma_from_snr(const LabeledConstellation &c, double snr_db);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}

#endif
