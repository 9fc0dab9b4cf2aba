#pragma once

#include <vector>

#include "htjack/exactseries.hpp"

namespace htjack
{

// steps[i] is the vertical displacement of step i: -1 down, 0 flat, j >= 1 up by j.
struct lukasiewicz_path {
	std::vector<int> steps;
	friend bool operator==(const lukasiewicz_path &, const lukasiewicz_path &) = default;
};

struct cumulant_vector {
	Rational gamma;
	std::vector<Rational> kappa; // kappa[0] is kappa_1
};

struct moment_vector {
	std::vector<Rational> m; // m[0] is m_1; m_0 = 1 implicitly
};

inline constexpr int default_max_path_length = 14;

bool is_lukasiewicz(const lukasiewicz_path &p);

std::vector<lukasiewicz_path> enumerate_paths(int length, int max_length = default_max_path_length);

// (f(x) - f(x - gamma)) / gamma for f(x) = x^p.
Rational divided_difference_power(const Rational &x, unsigned p, const Rational &gamma);

Rational path_weight(const lukasiewicz_path &p, const cumulant_vector &kv);

// Sum of path_weight over all paths of the given length, computed by a
// depth-first walk that shares prefix products between paths.
Rational path_sum(const cumulant_vector &kv, int length, int max_length = default_max_path_length);

moment_vector moments_from_cumulants(const cumulant_vector &kv, int lmax, int max_length = default_max_path_length);
cumulant_vector cumulants_from_moments(const moment_vector &mv, const Rational &gamma, int lmax,
                                       int max_length = default_max_path_length);

} // namespace htjack
