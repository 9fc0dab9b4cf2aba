#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "htjack/exactseries.hpp"

namespace test_support
{

using htjack::Rational;

// Small random rationals p/q, p in [-lim, lim], q in [1, qmax].
inline Rational random_rational(std::mt19937_64 &rng, int lim = 5, int qmax = 4)
{
	std::uniform_int_distribution<int> p(-lim, lim), q(1, qmax);
	return htjack::ratio(p(rng), q(rng));
}

inline Rational random_positive(std::mt19937_64 &rng, int lim = 6, int qmax = 4)
{
	std::uniform_int_distribution<int> p(1, lim), q(1, qmax);
	return htjack::ratio(p(rng), q(rng));
}

inline std::vector<Rational> random_vector(std::mt19937_64 &rng, int n, int lim = 5, int qmax = 4)
{
	std::vector<Rational> v;
	for (int i = 0; i < n; ++i)
		v.push_back(random_rational(rng, lim, qmax));
	return v;
}

// Stirling numbers of the second kind, S[n][k].
inline std::vector<std::vector<Rational>> stirling2(int n_max)
{
	std::vector<std::vector<Rational>> S(n_max + 1, std::vector<Rational>(n_max + 1, 0));
	S[0][0] = 1;
	for (int n = 1; n <= n_max; ++n)
		for (int k = 1; k <= n; ++k)
			S[n][k] = k * S[n - 1][k] + S[n - 1][k - 1];
	return S;
}

// All partitions of n, weakly decreasing.
inline void partitions_of(int n, int max_part, std::vector<int> &cur, std::vector<std::vector<int>> &out)
{
	if (n == 0) {
		out.push_back(cur);
		return;
	}
	for (int p = std::min(n, max_part); p >= 1; --p) {
		cur.push_back(p);
		partitions_of(n - p, p, cur, out);
		cur.pop_back();
	}
}

inline std::vector<std::vector<int>> partitions_up_to(int size)
{
	std::vector<std::vector<int>> out;
	std::vector<int> cur;
	for (int n = 0; n <= size; ++n)
		partitions_of(n, n, cur, out);
	return out;
}

// Stationary law of a row-stochastic matrix, by Gaussian elimination on
// pi (P - I) = 0 with the last equation replaced by sum pi = 1.
inline std::vector<double> stationary(std::vector<std::vector<double>> P)
{
	const std::size_t n = P.size();
	std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0));
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < n; ++j)
			A[j][i] = P[i][j] - (i == j ? 1 : 0);
	for (std::size_t i = 0; i < n; ++i)
		A[n - 1][i] = 1;
	A[n - 1][n] = 1;
	for (std::size_t c = 0; c < n; ++c) {
		std::size_t piv = c;
		for (std::size_t r = c + 1; r < n; ++r)
			if (std::abs(A[r][c]) > std::abs(A[piv][c]))
				piv = r;
		std::swap(A[c], A[piv]);
		for (std::size_t r = 0; r < n; ++r) {
			if (r == c)
				continue;
			const double f = A[r][c] / A[c][c];
			for (std::size_t k = c; k <= n; ++k)
				A[r][k] -= f * A[c][k];
		}
	}
	std::vector<double> pi(n);
	for (std::size_t i = 0; i < n; ++i)
		pi[i] = A[i][n] / A[i][i];
	return pi;
}

} // namespace test_support
