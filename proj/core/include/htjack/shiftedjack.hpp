#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "htjack/exactseries.hpp"

namespace htjack
{

struct row_qstar_input {
	std::vector<Rational> x;
	Rational theta;
	int k = 0;
};

// Cap on the work of one evaluation, counted in rational multiply-adds.
inline constexpr std::uint64_t default_qstar_budget = 200'000'000;

// Q*_(k)(x; theta): sum over i_1 <= ... <= i_k of
//   prod_l theta^(m_l) / m_l!  *  (x_{i_1} - k + 1) ... (x_{i_{k-1}} - 1) x_{i_k}
// with m_l the multiplicity of l among the indices. The sum is organised
// index by index: the m_l copies of index l occupy consecutive positions, so
// a table over "positions filled so far" collects it in O(N k^2) steps.
Rational qstar_row(const row_qstar_input &in, std::uint64_t budget = default_qstar_budget);

// Direct enumeration of the index tuples; exponential, for cross-checks.
Rational qstar_row_enumerate(const row_qstar_input &in, std::uint64_t budget = default_qstar_budget);

struct gamma_product_report {
	int k_max = 0;
	double lhs = 0; // partial sum of (-1)^k Q*_(k) / z^(k)
	double rhs = 0; // product of gamma ratios
	double abs_err = 0;
	double tol = 0;
	bool pass = false;
	std::vector<double> partial_errors; // |partial sum up to k - rhs|, k = 0..k_max
	std::string to_json() const;
};

gamma_product_report gamma_product_check(const std::vector<Rational> &x, const Rational &theta, const Rational &z,
                                         int k_max, double tol = 1e-8);

struct ck_limit_row {
	int N;
	std::vector<Rational> qstar; // Q*_(k), k = 1..k_max
	std::vector<double> error;   // |Q*_(k) - c_k|
};

struct ck_limit_report {
	std::vector<int> lambda;
	int n = 0;
	Rational gamma;
	std::vector<Rational> predicted_c; // c_1..c_k_max
	std::vector<ck_limit_row> rows;
	bool decreasing = false; // per k, errors shrink along the N ladder (or sit at zero)
	std::string to_json() const;
};

// lambda_n^(N): each lambda_j (j <= n) repeated floor(N/n) or ceil(N/n) times,
// the first N mod n parts getting the extra copy.
std::vector<int> replicate_partition(const std::vector<int> &lambda, int n, int N);

ck_limit_report ck_limit_experiment(const std::vector<int> &lambda, int n, const std::vector<int> &N_list,
                                    const Rational &gamma, int k_max = 4);

} // namespace htjack
