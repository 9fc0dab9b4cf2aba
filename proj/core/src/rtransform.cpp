#include "htjack/rtransform.hpp"

#include <json.hpp>

#include "htjack/errors.hpp"

namespace htjack
{

std::string family_name(Family f)
{
	switch (f) {
	case Family::planch:
		return "planch";
	case Family::alpha:
		return "alpha";
	case Family::beta:
		return "beta";
	}
	return "?";
}

Family parse_family(const std::string &s)
{
	if (s == "planch")
		return Family::planch;
	if (s == "alpha")
		return Family::alpha;
	if (s == "beta")
		return Family::beta;
	throw parameter_error("unknown family '" + s + "' (expected planch, alpha or beta)");
}

ensemble_spec ensemble_spec::planch(Rational gamma, Rational eta)
{
	ensemble_spec s{Family::planch, std::move(gamma), std::move(eta), {}, {}};
	s.validate();
	return s;
}

ensemble_spec ensemble_spec::alpha(Rational gamma, Rational eta, Rational c)
{
	ensemble_spec s{Family::alpha, std::move(gamma), std::move(eta), std::move(c), {}};
	s.validate();
	return s;
}

ensemble_spec ensemble_spec::beta(Rational gamma, Rational c, int M)
{
	ensemble_spec s{Family::beta, std::move(gamma), {}, std::move(c), M};
	s.validate();
	return s;
}

void ensemble_spec::validate() const
{
	const auto fam = family_name(family);
	auto need = [&](bool present, const char *name) {
		if (!present)
			throw parameter_error(fam + " needs " + name);
	};
	auto forbid = [&](bool present, const char *name) {
		if (present)
			throw parameter_error(std::string(name) + " is not a parameter of " + fam);
	};
	if (gamma <= 0)
		throw parameter_error("gamma must be positive");
	switch (family) {
	case Family::planch:
		need(eta.has_value(), "eta");
		forbid(c.has_value(), "c");
		forbid(M.has_value(), "M");
		break;
	case Family::alpha:
		need(eta.has_value(), "eta");
		need(c.has_value(), "c");
		forbid(M.has_value(), "M");
		break;
	case Family::beta:
		need(c.has_value(), "c");
		need(M.has_value(), "M");
		forbid(eta.has_value(), "eta");
		break;
	}
	if (eta && *eta <= 0)
		throw parameter_error("eta must be positive");
	if (c && (*c <= 0 || *c >= 1))
		throw parameter_error("c must lie in (0,1)");
	if (M && *M < 1)
		throw parameter_error("M must be >= 1");
}

std::string ensemble_spec::to_json() const
{
	nlohmann::json j;
	j["family"] = family_name(family);
	j["gamma"] = to_string(gamma);
	if (eta)
		j["eta"] = to_string(*eta);
	if (c)
		j["c"] = to_string(*c);
	if (M)
		j["M"] = *M;
	return j.dump();
}

cumulant_vector family_cumulants(const ensemble_spec &spec, int n_max)
{
	spec.validate();
	cumulant_vector kv{spec.gamma, std::vector<Rational>(n_max)};
	switch (spec.family) {
	case Family::planch:
		if (n_max > 0)
			kv.kappa[0] = *spec.eta;
		break;
	case Family::alpha: {
		const Rational r = *spec.c / (1 - *spec.c);
		Rational p = r;
		for (int n = 0; n < n_max; ++n, p *= r)
			kv.kappa[n] = *spec.eta * p;
		break;
	}
	case Family::beta: {
		Rational p = *spec.c;
		for (int n = 0; n < n_max; ++n, p *= *spec.c)
			kv.kappa[n] = (n % 2 ? -1 : 1) * *spec.M * p;
		break;
	}
	}
	return kv;
}

c_sequence kappa_to_c(const cumulant_vector &kv, int K)
{
	if (kv.kappa.size() < static_cast<std::size_t>(K))
		throw precondition_error("not enough cumulants");
	truncated_series s(Basis::z_powers, K);
	for (int k = 1; k <= K; ++k)
		s[k] = kv.kappa[k - 1] / k;
	auto e = series_exp(s);
	c_sequence cs;
	for (int n = 1; n <= K; ++n)
		cs.c.push_back(rising(kv.gamma, n) * e[n]);
	return cs;
}

cumulant_vector c_to_kappa(const c_sequence &cs, const Rational &gamma, int K)
{
	if (gamma <= 0)
		throw parameter_error("gamma must be positive");
	if (cs.c.size() < static_cast<std::size_t>(K))
		throw precondition_error("not enough c coefficients");
	truncated_series s(Basis::z_powers, K);
	s[0] = 1;
	for (int n = 1; n <= K; ++n)
		s[n] = cs.c[n - 1] / rising(gamma, n);
	auto l = series_log(s);
	cumulant_vector kv{gamma, {}};
	for (int k = 1; k <= K; ++k)
		kv.kappa.push_back(k * l[k]);
	return kv;
}

namespace
{

// (e^{gamma t} - 1) / t as EGF coefficients gamma^{n+1} / (n+1).
truncated_series exp_minus_one_over_t(const Rational &gamma, unsigned order)
{
	truncated_series e(Basis::t_powers, order);
	Rational p = gamma;
	for (unsigned n = 0; n <= order; ++n, p *= gamma)
		e[n] = p / (n + 1);
	return e;
}

// 1 - e^{-t}
truncated_series one_minus_exp_neg(unsigned order)
{
	truncated_series d(Basis::t_powers, order);
	for (unsigned n = 1; n <= order; ++n)
		d[n] = n % 2 ? 1 : -1;
	return d;
}

truncated_series raising_side(const c_sequence &cs, int K)
{
	if (cs.c.size() < static_cast<std::size_t>(K))
		throw precondition_error("not enough c coefficients");
	truncated_series a(Basis::raising_inv, K);
	a[0] = 1;
	for (int n = 1; n <= K; ++n)
		a[n] = n % 2 ? Rational(-cs.c[n - 1]) : cs.c[n - 1];
	return a;
}

c_sequence read_c(const truncated_series &a_zinv, int K)
{
	auto a = zinv_to_raising_inv(a_zinv);
	c_sequence cs;
	for (int n = 1; n <= K; ++n)
		cs.c.push_back(n % 2 ? Rational(-a[n]) : a[n]);
	return cs;
}

void check_gamma(const Rational &gamma, int n)
{
	if (gamma <= 0)
		throw parameter_error("gamma must be positive");
	if (n < 1)
		throw precondition_error("truncation order must be >= 1");
}

} // namespace

moment_vector c_to_m(const c_sequence &cs, const Rational &gamma, int lmax)
{
	check_gamma(gamma, lmax);
	auto log_a = series_log(raising_inv_to_zinv(raising_side(cs, lmax)));
	auto g = formal_laplace_inv(log_a); // order lmax - 1
	auto num = exp_minus_one_over_t(gamma, lmax) + series_mul(g, one_minus_exp_neg(lmax));
	if (num.order() < static_cast<unsigned>(lmax))
		throw precondition_error("internal truncation loss");
	if (num[0] != gamma)
		throw computation_error("gamma M(0) != gamma in c_to_m");
	moment_vector mv;
	for (int n = 1; n <= lmax; ++n)
		mv.m.push_back((n % 2 ? -1 : 1) * num[n] / gamma);
	return mv;
}

c_sequence m_to_c(const moment_vector &mv, const Rational &gamma, int K)
{
	check_gamma(gamma, K);
	if (mv.m.size() < static_cast<std::size_t>(K))
		throw precondition_error("not enough moments");
	truncated_series mneg(Basis::t_powers, K); // M(-t)
	mneg[0] = 1;
	for (int n = 1; n <= K; ++n)
		mneg[n] = n % 2 ? Rational(-mv.m[n - 1]) : mv.m[n - 1];
	auto num = gamma * mneg - exp_minus_one_over_t(gamma, K);
	if (num[0] != 0)
		throw computation_error("numerator constant term gamma M(0) - gamma is not zero");
	auto g = shifted_divide(num, one_minus_exp_neg(K));
	return read_c(series_exp(formal_laplace(g)), K);
}

moment_vector c_to_m_bernoulli(const c_sequence &cs, const Rational &gamma, int lmax)
{
	check_gamma(gamma, lmax);
	auto log_a = series_log(raising_inv_to_zinv(raising_side(cs, lmax)));
	auto kh = formal_laplace_inv(Rational(1 / gamma) * log_a); // kernel * h, order lmax - 1
	auto h = series_div(kh, bernoulli_kernel(lmax - 1));
	// h has EGF coefficient (n-1)! [(-1)^n m_n / n! - gamma^n / (n+1)!] at t^{n-1}
	moment_vector mv;
	for (int n = 1; n <= lmax; ++n) {
		Rational v = n * h[n - 1] + pow(gamma, n) / (n + 1);
		mv.m.push_back(n % 2 ? Rational(-v) : v);
	}
	return mv;
}

c_sequence m_to_c_bernoulli(const moment_vector &mv, const Rational &gamma, int K)
{
	check_gamma(gamma, K);
	if (mv.m.size() < static_cast<std::size_t>(K))
		throw precondition_error("not enough moments");
	truncated_series h(Basis::t_powers, K - 1);
	for (int n = 1; n <= K; ++n) {
		Rational sm = n % 2 ? Rational(-mv.m[n - 1]) : mv.m[n - 1];
		h[n - 1] = sm / n - pow(gamma, n) / (n * (n + 1));
	}
	auto inner = series_mul(bernoulli_kernel(K - 1), h);
	return read_c(series_exp(gamma * formal_laplace(inner)), K);
}

std::string equivalence_report::to_json() const
{
	nlohmann::json j;
	j["gamma"] = to_string(gamma);
	j["lmax"] = lmax;
	auto &r = j["results"] = nlohmann::json::array();
	for (auto &row : results)
		r.push_back({{"ell", row.ell},
		             {"paths", to_string(row.paths)},
		             {"transform", to_string(row.transform)},
		             {"equal", row.equal}});
	j["all_equal"] = all_equal();
	if (first_mismatch)
		j["first_mismatch"] = *first_mismatch;
	return j.dump(2);
}

equivalence_report equivalence_check(const cumulant_vector &kv, int lmax)
{
	auto paths = moments_from_cumulants(kv, lmax);
	auto transform = c_to_m(kappa_to_c(kv, lmax), kv.gamma, lmax);
	equivalence_report rep{kv.gamma, lmax, {}, {}};
	for (int l = 1; l <= lmax; ++l) {
		const bool eq = paths.m[l - 1] == transform.m[l - 1];
		rep.results.push_back({l, paths.m[l - 1], transform.m[l - 1], eq});
		if (!eq && !rep.first_mismatch)
			rep.first_mismatch = l;
	}
	return rep;
}

} // namespace htjack
