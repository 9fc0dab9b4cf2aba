#include "htjack/shiftedjack.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "htjack/cumulants.hpp"
#include "htjack/errors.hpp"
#include "htjack/rtransform.hpp"

namespace htjack
{

namespace
{

void check_input(const row_qstar_input &in)
{
	if (in.x.empty())
		throw precondition_error("Q* needs N >= 1 variables");
	if (in.theta <= 0)
		throw parameter_error("theta must be positive");
	if (in.k < 0)
		throw precondition_error("k must be >= 0");
}

std::vector<Rational> theta_weights(const Rational &theta, int k)
{
	// theta^(m) / m!
	std::vector<Rational> w(k + 1);
	w[0] = 1;
	for (int m = 1; m <= k; ++m)
		w[m] = w[m - 1] * (theta + (m - 1)) / m;
	return w;
}

} // namespace

Rational qstar_row(const row_qstar_input &in, std::uint64_t budget)
{
	check_input(in);
	const int k = in.k;
	const std::uint64_t N = in.x.size();
	const std::uint64_t work = N * static_cast<std::uint64_t>(k + 1) * static_cast<std::uint64_t>(k + 1);
	if (work > budget)
		throw resource_error("Q* evaluation exceeds the configured budget");
	if (k == 0)
		return 1;
	const auto w = theta_weights(in.theta, k);
	// filled[s]: summed weight of assignments of positions 1..s to the indices seen so far
	std::vector<Rational> filled(k + 1), next(k + 1);
	filled[0] = 1;
	for (const auto &xl : in.x) {
		for (int s = 0; s <= k; ++s) {
			// index l takes positions s-m+1..s; position r contributes (x_l - (k - r))
			Rational acc = 0, prod = 1;
			for (int m = 0; m <= s; ++m) {
				if (m > 0)
					prod *= xl - k + (s - m + 1);
				if (filled[s - m] != 0 && prod != 0)
					acc += filled[s - m] * w[m] * prod;
			}
			next[s] = acc;
		}
		std::swap(filled, next);
	}
	return filled[k];
}

Rational qstar_row_enumerate(const row_qstar_input &in, std::uint64_t budget)
{
	check_input(in);
	const int k = in.k;
	const int N = static_cast<int>(in.x.size());
	if (Rational(binomial(N + k - 1, k)) > Rational(static_cast<unsigned long>(budget)))
		throw resource_error("Q* enumeration exceeds the configured budget");
	const auto w = theta_weights(in.theta, k);
	std::vector<int> idx(k, 0);
	Rational total = 0;
	while (true) {
		Rational term = 1;
		int run = 0;
		for (int r = 0; r < k; ++r) {
			term *= in.x[idx[r]] - (k - 1 - r);
			++run;
			if (r + 1 == k || idx[r + 1] != idx[r]) {
				term *= w[run];
				run = 0;
			}
		}
		total += term;
		// next weakly increasing tuple
		int p = k - 1;
		while (p >= 0 && idx[p] == N - 1)
			--p;
		if (p < 0)
			break;
		++idx[p];
		for (int q = p + 1; q < k; ++q)
			idx[q] = idx[p];
	}
	return total;
}

std::string gamma_product_report::to_json() const
{
	nlohmann::json j{{"k_max", k_max}, {"lhs", lhs}, {"rhs", rhs}, {"abs_err", abs_err}, {"tol", tol}, {"pass", pass}};
	return j.dump(2);
}

gamma_product_report gamma_product_check(const std::vector<Rational> &x, const Rational &theta, const Rational &z,
                                         int k_max, double tol)
{
	if (x.empty())
		throw precondition_error("need N >= 1 variables");
	if (theta <= 0)
		throw parameter_error("theta must be positive");
	Rational A = 0;
	for (auto &xi : x)
		A = std::max<Rational>(A, abs(xi));
	const int N = static_cast<int>(x.size());
	if (z <= N * theta + A)
		throw precondition_error("z must exceed N theta + max|x_i| for the series to converge");

	// product side: every gamma argument is positive here
	const double zd = to_double(z), th = to_double(theta);
	double log_rhs = 0;
	for (int i = 1; i <= N; ++i) {
		const double xi = to_double(x[i - 1]);
		log_rhs += std::lgamma(xi + zd - i * th) + std::lgamma(zd - (i - 1) * th) - std::lgamma(xi + zd - (i - 1) * th)
		           - std::lgamma(zd - i * th);
	}
	gamma_product_report rep;
	rep.k_max = k_max;
	rep.rhs = std::exp(log_rhs);
	rep.tol = tol;

	Rational partial = 0, zr = 1;
	for (int k = 0; k <= k_max; ++k) {
		if (k > 0)
			zr *= z + (k - 1);
		Rational term = qstar_row({x, theta, k}) / zr;
		partial += k % 2 ? Rational(-term) : term;
		rep.partial_errors.push_back(std::abs(to_double(partial) - rep.rhs));
	}
	rep.lhs = to_double(partial);
	rep.abs_err = std::abs(rep.lhs - rep.rhs);
	rep.pass = rep.abs_err < tol;
	return rep;
}

std::vector<int> replicate_partition(const std::vector<int> &lambda, int n, int N)
{
	if (n < 1 || static_cast<int>(lambda.size()) > n)
		throw precondition_error("partition longer than n");
	if (N < n)
		throw precondition_error("N must be at least n");
	std::vector<int> out;
	const int q = N / n, extra = N % n;
	for (int j = 0; j < n; ++j) {
		const int part = j < static_cast<int>(lambda.size()) ? lambda[j] : 0;
		out.insert(out.end(), q + (j < extra ? 1 : 0), part);
	}
	return out;
}

std::string ck_limit_report::to_json() const
{
	nlohmann::json j;
	j["lambda"] = lambda;
	j["n"] = n;
	j["gamma"] = to_string(gamma);
	auto &pc = j["predicted_c"] = nlohmann::json::array();
	for (auto &c : predicted_c)
		pc.push_back(to_string(c));
	auto &rs = j["rows"] = nlohmann::json::array();
	for (auto &r : rows) {
		nlohmann::json row{{"N", r.N}, {"error", r.error}};
		auto &q = row["qstar"] = nlohmann::json::array();
		for (auto &v : r.qstar)
			q.push_back(to_double(v));
		rs.push_back(row);
	}
	j["decreasing"] = decreasing;
	return j.dump(2);
}

ck_limit_report ck_limit_experiment(const std::vector<int> &lambda, int n, const std::vector<int> &N_list,
                                    const Rational &gamma, int k_max)
{
	if (gamma <= 0)
		throw parameter_error("gamma must be positive");
	if (!std::is_sorted(lambda.rbegin(), lambda.rend()))
		throw precondition_error("lambda must be weakly decreasing");
	ck_limit_report rep{lambda, n, gamma, {}, {}, true};

	// m_k = sum_j int_{(j-1)/n}^{j/n} (lambda_j - gamma x)^k dx
	moment_vector mv;
	for (int k = 1; k <= k_max; ++k) {
		Rational mk = 0;
		for (int j = 1; j <= n; ++j) {
			const Rational lj = j <= static_cast<int>(lambda.size()) ? lambda[j - 1] : 0;
			const Rational a = lj - gamma * ratio(j - 1, n), b = lj - gamma * ratio(j, n);
			mk += (pow(a, k + 1) - pow(b, k + 1)) / (gamma * (k + 1));
		}
		mv.m.push_back(mk);
	}
	rep.predicted_c = kappa_to_c(cumulants_from_moments(mv, gamma, k_max), k_max).c;

	for (int N : N_list) {
		const auto rep_lambda = replicate_partition(lambda, n, N);
		std::vector<Rational> x(rep_lambda.begin(), rep_lambda.end());
		ck_limit_row row{N, {}, {}};
		for (int k = 1; k <= k_max; ++k) {
			row.qstar.push_back(qstar_row({x, gamma / N, k}));
			row.error.push_back(std::abs(to_double(row.qstar.back() - rep.predicted_c[k - 1])));
		}
		rep.rows.push_back(std::move(row));
	}
	for (std::size_t r = 1; r < rep.rows.size(); ++r)
		for (int k = 0; k < k_max; ++k) {
			const double prev = rep.rows[r - 1].error[k], cur = rep.rows[r].error[k];
			if (!(cur < prev || (cur == 0 && prev == 0)))
				rep.decreasing = false;
		}
	return rep;
}

} // namespace htjack
