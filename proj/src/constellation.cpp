#include "bmstrun/constellation.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "bmstrun/error.hpp"

namespace bmstrun
{

LabeledConstellation::LabeledConstellation(std::string name, int q, int dim, std::vector<double> points,
                                           std::vector<int> label)
	: name_(std::move(name)), q_(q), dim_(dim), points_(std::move(points)), label_(std::move(label))
{
	if (q_ < 2)
		throw ConfigError("constellation " + name_ + ": q must be at least 2");
	if (dim_ != 1 && dim_ != 2)
		throw ConfigError("constellation " + name_ + ": dimension must be 1 or 2");
	if (points_.size() != static_cast<std::size_t>(q_ * dim_))
		throw ConfigError("constellation " + name_ + ": expected " + std::to_string(q_) + " points");
	if (label_.size() != static_cast<std::size_t>(q_))
		throw ConfigError("constellation " + name_ + ": label must have q entries");
	for (double x : points_)
		if (!std::isfinite(x))
			throw ConfigError("constellation " + name_ + ": non-finite coordinate");

	std::vector<bool> seen(q_, false);
	for (int l : label_)
	{
		if (l < 0 || l >= q_ || seen[l])
			throw ConfigError("constellation " + name_ + ": label is not a bijection");
		seen[l] = true;
	}
	if (!(min_distance() > 0.0))
		throw ConfigError("constellation " + name_ + ": duplicate points");

	mapped_.resize(points_.size());
	for (int u = 0; u < q_; ++u)
		for (int k = 0; k < dim_; ++k)
			mapped_[u * dim_ + k] = points_[label_[u] * dim_ + k];
}

double LabeledConstellation::average_energy() const
{
	double e = 0.0;
	for (double x : points_)
		e += x * x;
	return e / q_;
}

double LabeledConstellation::min_distance() const
{
	double best = std::numeric_limits<double>::infinity();
	for (int a = 0; a < q_; ++a)
		for (int b = a + 1; b < q_; ++b)
		{
			double d2 = 0.0;
			for (int k = 0; k < dim_; ++k)
			{
				const double diff = points_[a * dim_ + k] - points_[b * dim_ + k];
				d2 += diff * diff;
			}
			best = std::min(best, d2);
		}
	return std::sqrt(best);
}

LabeledConstellation LabeledConstellation::scaled(double k) const
{
	auto pts = points_;
	for (auto &x : pts)
		x *= k;
	return {name_, q_, dim_, std::move(pts), label_};
}

LabeledConstellation LabeledConstellation::relabeled(std::vector<int> label) const
{
	return {name_, q_, dim_, points_, std::move(label)};
}

namespace
{

std::vector<int> identity_label(int q)
{
	std::vector<int> l(q);
	for (int i = 0; i < q; ++i)
		l[i] = i;
	return l;
}

LabeledConstellation pam(const std::string &name, int M)
{
	std::vector<double> pts(M);
	for (int u = 0; u < M; ++u)
		pts[u] = 2.0 * u - (M - 1);
	return {name, M, 1, std::move(pts), identity_label(M)};
}

}

std::vector<std::string> builtin_names()
{
	return {"BPSK", "3-PAM", "4-PAM", "8-PSK", "16-QAM", "16-PAM-uniform"};
}

LabeledConstellation builtin(const std::string &name)
{
	if (name == "BPSK")
		return {name, 2, 1, {1.0, -1.0}, {0, 1}};
	if (name == "3-PAM")
		return {name, 3, 1, {-1.0, 0.0, 1.0}, {0, 1, 2}};
	if (name == "4-PAM")
		return pam(name, 4);
	if (name == "16-PAM-uniform")
		return pam(name, 16);
	if (name == "8-PSK")
	{
		std::vector<double> pts;
		for (int u = 0; u < 8; ++u)
		{
			const double a = 2.0 * std::numbers::pi * u / 8.0;
			pts.push_back(std::cos(a));
			pts.push_back(std::sin(a));
		}
		return {name, 8, 2, std::move(pts), identity_label(8)};
	}
	if (name == "16-QAM")
	{
		const double levels[] = {-3.0, -1.0, 1.0, 3.0};
		std::vector<double> pts;
		for (double row : levels)
			for (double col : levels)
			{
				pts.push_back(col);
				pts.push_back(row);
			}
		return {name, 16, 2, std::move(pts), identity_label(16)};
	}
	throw ConfigError("unknown constellation: " + name);
}

LabeledConstellation parse_constellation(std::istream &in, const std::string &name)
{
	std::vector<std::string> lines;
	std::string line;
	while (std::getline(in, line))
	{
		if (auto hash = line.find('#'); hash != std::string::npos)
			line.erase(hash);
		if (line.find_first_not_of(" \t\r") != std::string::npos)
			lines.push_back(line);
	}

	auto numbers = [&](const std::string &text, std::size_t expected, const char *what) {
		std::istringstream ss(text);
		std::vector<double> v;
		double x;
		while (ss >> x)
			v.push_back(x);
		if (!ss.eof() || v.size() != expected)
			throw ConfigError("constellation " + name + ": malformed " + what + " line: '" + text + "'");
		return v;
	};

	if (lines.empty())
		throw ConfigError("constellation " + name + ": empty file");
	const auto header = numbers(lines[0], 2, "header");
	const int q = static_cast<int>(header[0]);
	const int dim = static_cast<int>(header[1]);
	if (q != header[0] || dim != header[1] || q < 2 || (dim != 1 && dim != 2))
		throw ConfigError("constellation " + name + ": bad header '" + lines[0] + "'");
	if (lines.size() != static_cast<std::size_t>(q) + 2)
		throw ConfigError("constellation " + name + ": expected " + std::to_string(q + 2) + " non-comment lines, got " +
		                  std::to_string(lines.size()));

	std::vector<double> pts;
	for (int i = 0; i < q; ++i)
		for (double x : numbers(lines[1 + i], dim, "point"))
			pts.push_back(x);

	std::vector<int> label;
	for (double x : numbers(lines[q + 1], q, "label"))
	{
		if (x != static_cast<int>(x))
			throw ConfigError("constellation " + name + ": non-integer label");
		label.push_back(static_cast<int>(x));
	}
	return {name, q, dim, std::move(pts), std::move(label)};
}

LabeledConstellation load_constellation(const std::filesystem::path &path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("cannot open constellation file " + path.string());
	return parse_constellation(in, path.stem().string());
}

LabeledConstellation resolve_constellation(const std::string &name_or_path)
{
	for (const auto &n : builtin_names())
		if (n == name_or_path)
			return builtin(n);
	if (std::filesystem::exists(name_or_path))
		return load_constellation(name_or_path);
	throw ConfigError("unknown constellation (not a builtin name or readable file): " + name_or_path);
}

NoiseScale sigma_from_snr(const LabeledConstellation &c, double snr_db)
{
	const double snr = db_to_linear(snr_db);
	return {snr_db, std::sqrt(c.average_energy() / (c.dim() * snr))};
}

}
