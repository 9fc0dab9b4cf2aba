#pragma once

#include <complex>
#include <string>
#include <vector>

#include "htjack/rtransform.hpp"
#include "htjack/spectra.hpp"

namespace htjack
{

struct interval {
	double a, b;
};

struct crystal_density {
	double gamma = 1;
	std::vector<interval> intervals; // sorted, disjoint, height 1/gamma
	double truncation_residual = 0;  // tail mass not represented by the intervals
	int dropped_degenerate = 0;
	std::vector<double> interval_masses;

	double height() const
	{
		return 1 / gamma;
	}
};

inline constexpr double default_mass_tol = 1e-8;

// planch and alpha: [-gamma, -l_1], [1 - l_k, -l_{k+1}] for k >= 1, cut once the
// intervals are thinner than mass_tol/10 and the mass reaches 1 - mass_tol; the
// tail mass (l_K - (1-K))/gamma after the last root used is the residual.
// beta: [-gamma, -l_1], [1 - l_k, -l_{k+1}] for k < M, and [1 - l_M, M].
crystal_density build_density(const ensemble_spec &spec, const root_list &roots, double mass_tol = default_mass_tol,
                              double root_tol = default_root_tol);

double mass(const crystal_density &d);
double density_at(const crystal_density &d, double x);
double cdf(const crystal_density &d, double x);
double moment(const crystal_density &d, int n);
std::complex<double> charfn(const crystal_density &d, double t);
// sup |F_emp - F| over the sample; samples must be sorted.
double ks_distance(const crystal_density &d, const std::vector<double> &sorted_samples);

// Largest gap defect: max over consecutive intervals of |gap - round(gap)|,
// plus the smallest gap seen.
struct gap_summary {
	double min_gap = 0;
	double max_defect = 0;
};
gap_summary support_gaps(const crystal_density &d);

// `config_json` is embedded verbatim under "config".
std::string density_to_json(const crystal_density &d, const std::string &config_json = "{}");
crystal_density density_from_json(const std::string &text);
std::string density_to_csv(const crystal_density &d, int points, const std::string &config_json = "{}");

struct bar {
	double left, right, height;
};

// 800 x 400 viewport, 60 px margins. x maps [xmin, xmax] linearly onto
// [60, 740]; y maps [0, ymax] onto [340, 60]. xmin/xmax span the density
// support and the bars, padded by 0.5; ymax is 1.15 * the tallest of 1/gamma
// and the bars. Ticks at every integer in x, five evenly spaced in y.
std::string overlay_svg(const crystal_density &d, const std::vector<bar> &bars, const std::string &title,
                        const std::string &config_json = "{}");

} // namespace htjack
