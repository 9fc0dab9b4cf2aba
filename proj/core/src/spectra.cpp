#include "htjack/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "htjack/errors.hpp"

namespace htjack
{

namespace
{

constexpr double eps = std::numeric_limits<double>::epsilon();

// Neumaier's variant of Kahan summation.
struct compensated_sum {
	double sum = 0, comp = 0;
	void add(double x)
	{
		const double t = sum + x;
		if (std::abs(sum) >= std::abs(x))
			comp += (sum - t) + x;
		else
			comp += (x - t) + sum;
		sum = t;
	}
	double value() const
	{
		return sum + comp;
	}
};

bool is_nonpositive_integer(double x)
{
	return x <= 0 && x == std::floor(x);
}

// sin(pi x) with exact argument reduction.
double sinpi(double x)
{
	double r = x - 2 * std::round(x / 2); // [-1, 1]
	if (r > 0.5)
		r = 1 - r;
	else if (r < -0.5)
		r = -1 - r;
	return std::sin(std::numbers::pi * r);
}

} // namespace

double hyp1f1(double a, double b, double x)
{
	if (is_nonpositive_integer(b))
		throw precondition_error("1F1: b is a pole of the series");
	compensated_sum s;
	double term = 1;
	int small = 0;
	for (int n = 0; n < 100000; ++n) {
		s.add(term);
		if (is_nonpositive_integer(a) && n >= -a)
			return s.value();
		term *= (a + n) * x / ((b + n) * (n + 1));
		if (std::abs(term) <= eps * std::abs(s.value()) && n > std::abs(x)) {
			if (++small >= 3)
				return s.value();
		} else {
			small = 0;
		}
	}
	throw computation_error("1F1 series did not converge");
}

double hyp2f1(double a, double b, double c, double x)
{
	const bool term_a = is_nonpositive_integer(a), term_b = is_nonpositive_integer(b);
	int degree = -1;
	if (term_a)
		degree = static_cast<int>(-a);
	if (term_b)
		degree = degree < 0 ? static_cast<int>(-b) : std::min(degree, static_cast<int>(-b));
	if (is_nonpositive_integer(c) && (degree < 0 || -c < degree))
		throw precondition_error("2F1: c is a pole of the series");
	if (degree < 0 && std::abs(x) >= 1)
		throw precondition_error("2F1: |x| >= 1 outside the disc of convergence");
	compensated_sum s;
	double term = 1;
	int small = 0;
	for (int n = 0; n < 1000000; ++n) {
		s.add(term);
		if (degree >= 0 && n >= degree)
			return s.value();
		term *= (a + n) * (b + n) * x / ((c + n) * (n + 1));
		if (degree < 0 && std::abs(term) <= eps * std::abs(s.value())) {
			if (++small >= 3)
				return s.value();
		} else {
			small = 0;
		}
	}
	throw computation_error("2F1 series did not converge");
}

double log_abs_rgamma(double x, int &sign)
{
	if (is_nonpositive_integer(x)) {
		sign = 0;
		return -std::numeric_limits<double>::infinity();
	}
	if (x > 0) {
		sign = 1;
		return -std::lgamma(x);
	}
	// 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
	const double s = sinpi(x);
	sign = s > 0 ? 1 : -1;
	return std::lgamma(1 - x) + std::log(std::abs(s)) - std::log(std::numbers::pi);
}

double rgamma(double x)
{
	int s;
	const double l = log_abs_rgamma(x, s);
	return s == 0 ? 0.0 : s * std::exp(l);
}

double scaled_value::value() const
{
	return mantissa == 0 ? 0.0 : mantissa * std::exp(log_scale);
}

namespace
{

struct log_term {
	double log_abs;
	int sign;
};

scaled_value sum_log_terms(const std::vector<log_term> &terms, double extra_log = 0)
{
	double top = -std::numeric_limits<double>::infinity();
	for (auto &t : terms)
		top = std::max(top, t.log_abs);
	if (!std::isfinite(top))
		return {0, 0};
	compensated_sum s;
	for (auto &t : terms)
		s.add(t.sign * std::exp(t.log_abs - top));
	return {s.value(), top + extra_log};
}

scaled_value gamma_series(const ensemble_spec &spec, double z)
{
	const double g = to_double(spec.gamma), eta = to_double(*spec.eta);
	const bool alpha = spec.family == Family::alpha;
	const double c = alpha ? to_double(*spec.c) : 0;
	std::vector<log_term> terms;
	double logc = 0; // log |coefficient_n|
	int sc = 1;
	double top = -std::numeric_limits<double>::infinity(), prev = top;
	const int n_min = static_cast<int>(std::max(0.0, -z)) + 3;
	for (int n = 0;; ++n) {
		if (n > 1000000)
			throw computation_error("characteristic series did not converge");
		int sg;
		const double lr = log_abs_rgamma(z + n, sg);
		double cur = -std::numeric_limits<double>::infinity();
		if (sg != 0 && sc != 0) {
			cur = logc + lr;
			terms.push_back({cur, sc * sg});
			top = std::max(top, cur);
		}
		// advance the coefficient to n+1
		if (alpha) {
			const double f = z - eta + n;
			if (f == 0)
				break; // all later coefficients vanish
			logc += std::log(g + n) + std::log(std::abs(f)) + std::log(c) - std::log(n + 1.0);
			if (f < 0)
				sc = -sc;
		} else {
			logc += std::log(g + n) + std::log(eta) - std::log(n + 1.0);
			sc = -sc;
		}
		if (n >= n_min && std::isfinite(cur) && cur < top - 40 && cur < prev)
			break;
		if (std::isfinite(cur))
			prev = cur;
	}
	return sum_log_terms(terms, alpha ? g * std::log1p(-c) : 0.0);
}

double beta_value(const ensemble_spec &spec, double z)
{
	const int M = *spec.M;
	const double g = to_double(spec.gamma), c = to_double(*spec.c);
	compensated_sum s;
	double coef = 1; // (-M)^(n) gamma^(n) c^n / n!
	for (int n = 0; n <= M; ++n) {
		double p = coef;
		for (int i = 0; i < M - n; ++i)
			p *= z + n + i;
		s.add(p);
		coef *= (n - M) * (g + n) * c / (n + 1);
	}
	return s.value();
}

} // namespace

scaled_value char_fn_scaled(const ensemble_spec &spec, double z)
{
	spec.validate();
	if (spec.family == Family::beta)
		return {beta_value(spec, z), 0};
	return gamma_series(spec, z);
}

double char_fn(const ensemble_spec &spec, double z)
{
	return char_fn_scaled(spec, z).value();
}

double alpha_char_fn_2f1(const ensemble_spec &spec, double z)
{
	if (spec.family != Family::alpha)
		throw precondition_error("second alpha form needs an alpha spec");
	const double g = to_double(spec.gamma), eta = to_double(*spec.eta), c = to_double(*spec.c);
	return std::pow(1 - c, eta) * rgamma(z) * hyp2f1(z - g, eta, z, c);
}

std::vector<Rational> beta_char_poly(const ensemble_spec &spec)
{
	spec.validate();
	if (spec.family != Family::beta)
		throw precondition_error("beta polynomial needs a beta spec");
	const int M = *spec.M;
	std::vector<Rational> poly(M + 1);
	Rational coef = 1;
	for (int n = 0; n <= M; ++n) {
		// (z+n)^(M-n) expanded
		std::vector<Rational> r{Rational(1)};
		for (int i = 0; i < M - n; ++i) {
			std::vector<Rational> nx(r.size() + 1);
			for (std::size_t k = 0; k < r.size(); ++k) {
				nx[k] += r[k] * (n + i);
				nx[k + 1] += r[k];
			}
			r = std::move(nx);
		}
		for (std::size_t k = 0; k < r.size(); ++k)
			poly[k] += coef * r[k];
		coef *= (n - M) * (spec.gamma + n) * *spec.c / (n + 1);
	}
	return poly;
}

jacobi_operator::jacobi_operator(const ensemble_spec &spec) : family_(spec.family)
{
	spec.validate();
	gamma_ = to_double(spec.gamma);
	if (spec.eta)
		eta_ = to_double(*spec.eta);
	if (spec.c)
		c_ = to_double(*spec.c);
	if (spec.M) {
		M_ = *spec.M;
		finite_size_ = M_;
	}
}

double jacobi_operator::diag(int i) const
{
	switch (family_) {
	case Family::planch:
		return 1 - eta_ - i;
	case Family::alpha:
		// (1 - i(1+c) - c(gamma+eta)) / (1-c)
		return (1 - i * (1 + c_) - c_ * (gamma_ + eta_)) / (1 - c_);
	case Family::beta:
		return M_ * (c_ - 1) + c_ * (gamma_ + 1) + i * (1 - 2 * c_);
	}
	return 0;
}

double jacobi_operator::offdiag(int i) const
{
	switch (family_) {
	case Family::planch:
		return -std::sqrt(eta_ * (gamma_ + i));
	case Family::alpha:
		return std::sqrt((i + gamma_) * (i + eta_) * c_) / (1 - c_);
	case Family::beta:
		return std::sqrt(c_ * (1 - c_) * i * (gamma_ + M_ - i));
	}
	return 0;
}

namespace
{

struct tridiagonal {
	std::vector<double> d, e2; // e2[i] couples i and i+1 (0-based)
	double pivmin = 0, lo = 0, hi = 0, scale = 0;

	tridiagonal(const jacobi_operator &op, int size) : d(size), e2(size > 1 ? size - 1 : 0)
	{
		double emax = 0, dmax = 0;
		std::vector<double> e(e2.size());
		for (int i = 0; i < size; ++i) {
			d[i] = op.diag(i + 1);
			dmax = std::max(dmax, std::abs(d[i]));
		}
		for (int i = 0; i + 1 < size; ++i) {
			e[i] = op.offdiag(i + 1);
			e2[i] = e[i] * e[i];
			emax = std::max(emax, std::abs(e[i]));
		}
		scale = dmax + 2 * emax;
		pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax * emax);
		lo = std::numeric_limits<double>::infinity();
		hi = -lo;
		for (int i = 0; i < size; ++i) {
			const double r = (i > 0 ? std::abs(e[i - 1]) : 0) + (i + 1 < size ? std::abs(e[i]) : 0);
			lo = std::min(lo, d[i] - r);
			hi = std::max(hi, d[i] + r);
		}
		const double pad = 2 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin;
		lo -= pad;
		hi += pad;
	}

	int count_below(double x) const
	{
		int neg = 0;
		double q = 1;
		for (std::size_t i = 0; i < d.size(); ++i) {
			q = (d[i] - x) - (i > 0 ? e2[i - 1] / q : 0.0);
			if (std::abs(q) < pivmin)
				q = -pivmin;
			neg += q < 0;
		}
		return neg;
	}

	// eigenvalue with `j` eigenvalues strictly below it (0-based ascending index)
	double eigenvalue(int j, double abs_tol) const
	{
		double a = lo, b = hi;
		while (true) {
			const double mid = a + (b - a) / 2;
			if (mid <= a || mid >= b)
				break;
			if (abs_tol > 0 && b - a <= abs_tol)
				break;
			if (count_below(mid) <= j)
				a = mid;
			else
				b = mid;
		}
		return a + (b - a) / 2;
	}
};

} // namespace

int sturm_count(const jacobi_operator &op, int size, double x)
{
	return tridiagonal(op, size).count_below(x);
}

std::vector<double> truncated_eigs(const jacobi_operator &op, int size, std::optional<int> top, double abs_tol)
{
	if (size < 1)
		throw precondition_error("truncation size must be >= 1");
	if (op.finite_size() && size != *op.finite_size())
		throw precondition_error("the beta operator has fixed size M");
	const tridiagonal t(op, size);
	const int want = top ? std::min(*top, size) : size;
	const double tol = abs_tol > 0 ? abs_tol * t.scale : 0;
	std::vector<double> out;
	for (int k = 0; k < want; ++k)
		out.push_back(t.eigenvalue(size - 1 - k, tol));
	return out;
}

int converged_truncation(const jacobi_operator &op, int count, double tol, int start, int cap)
{
	if (op.finite_size())
		return *op.finite_size();
	int size = std::max(start, count);
	auto prev = truncated_eigs(op, size, count, 0);
	while (size * 2 <= cap) {
		size *= 2;
		auto cur = truncated_eigs(op, size, count, 0);
		double move = 0;
		for (int k = 0; k < count; ++k)
			move = std::max(move, std::abs(cur[k] - prev[k]));
		if (move < tol / 10)
			return size;
		prev = std::move(cur);
	}
	return size;
}

namespace
{

template <typename F>
double bisect(F sign_at, double lo, int s_lo, double hi, double tol)
{
	while (hi - lo > tol) {
		const double mid = lo + (hi - lo) / 2;
		if (mid <= lo || mid >= hi)
			break;
		const int s = sign_at(mid);
		if (s == 0)
			return mid;
		if (s == s_lo)
			lo = mid;
		else
			hi = mid;
	}
	return lo + (hi - lo) / 2;
}

double horner(const std::vector<double> &p, double z)
{
	double v = 0;
	for (auto it = p.rbegin(); it != p.rend(); ++it)
		v = v * z + *it;
	return v;
}

int sgn(double v)
{
	return (v > 0) - (v < 0);
}

} // namespace

std::string root_list::to_csv() const
{
	std::ostringstream os;
	os.precision(17);
	os << "k,root\n";
	for (std::size_t k = 0; k < roots.size(); ++k)
		os << k + 1 << ',' << roots[k] << '\n';
	return os.str();
}

root_list find_roots(const ensemble_spec &spec, int count, double tol)
{
	spec.validate();
	if (count < 1)
		throw precondition_error("count must be >= 1");
	root_list out{{}, spec, false, {}};
	auto sign_at = [&](double z) { return char_fn_scaled(spec, z).sign(); };

	if (spec.family == Family::beta) {
		const jacobi_operator op(spec);
		const int M = *spec.M;
		for (double r : truncated_eigs(op, M, {}, 0)) {
			// polish on the polynomial when a sign change sits close by
			const double d = 1e-9 * std::max(1.0, std::abs(r));
			const int sl = sign_at(r - d), sh = sign_at(r + d);
			if (sl != 0 && sh != 0 && sl != sh)
				r = bisect(sign_at, r - d, sl, r + d, tol);
			out.roots.push_back(r);
		}
		return out;
	}

	const double g = to_double(spec.gamma), eta = to_double(*spec.eta);
	out.asymptotics_conjectural = spec.family == Family::alpha && spec.gamma != *spec.eta;
	const double h = 1.0 / 16, hi = g + 1;
	const long max_steps = static_cast<long>((hi + count + 20 + 2 * (g + eta)) / h);
	std::vector<scan_point> trace;
	double z0 = hi;
	int s0 = sign_at(z0);
	trace.push_back({z0, s0});
	for (long j = 1; j <= max_steps && static_cast<int>(out.roots.size()) < count; ++j) {
		const double z1 = hi - j * h;
		const int s1 = sign_at(z1);
		trace.push_back({z1, s1});
		if (s1 == 0)
			out.roots.push_back(z1);
		else if (s0 != 0 && s1 != s0)
			out.roots.push_back(bisect(sign_at, z1, s1, z0, tol));
		z0 = z1;
		s0 = s1;
	}
	if (static_cast<int>(out.roots.size()) < count) {
		nlohmann::json d;
		d["found"] = out.roots;
		d["requested"] = count;
		auto &t = d["scan_tail"] = nlohmann::json::array();
		for (std::size_t i = trace.size() > 64 ? trace.size() - 64 : 0; i < trace.size(); ++i)
			t.push_back({trace[i].z, trace[i].sign});
		throw computation_error("root scan found fewer sign changes than requested roots", d.dump());
	}
	for (int n = 1; n <= count; ++n)
		if (1 - n < -2 && std::abs(out.roots[n - 1] - (1 - n)) > 0.5)
			out.outside_asymptotic_window.push_back(n);
	return out;
}

std::vector<double> polynomial_roots_by_scan(const std::vector<double> &coeffs, double hi, int count, double tol)
{
	auto sign_at = [&](double z) { return sgn(horner(coeffs, z)); };
	const double h = 1.0 / 16;
	std::vector<double> roots;
	double z0 = hi;
	int s0 = sign_at(z0);
	const long max_steps = static_cast<long>((std::abs(hi) + 4.0 * count + 64) / h);
	for (long j = 1; j <= max_steps && static_cast<int>(roots.size()) < count; ++j) {
		const double z1 = hi - j * h;
		const int s1 = sign_at(z1);
		if (s1 == 0)
			roots.push_back(z1);
		else if (s0 != 0 && s1 != s0)
			roots.push_back(bisect(sign_at, z1, s1, z0, tol));
		z0 = z1;
		s0 = s1;
	}
	return roots;
}

std::vector<double> char_poly_from_recurrence(const jacobi_operator &op)
{
	if (!op.finite_size())
		throw precondition_error("characteristic polynomial needs a finite operator");
	const int M = *op.finite_size();
	std::vector<double> pm2, pm1{1.0};
	for (int k = 1; k <= M; ++k) {
		std::vector<double> p(k + 1, 0.0);
		for (std::size_t i = 0; i < pm1.size(); ++i) {
			p[i + 1] += pm1[i];
			p[i] -= op.diag(k) * pm1[i];
		}
		if (k >= 2) {
			const double w = op.offdiag(k - 1);
			for (std::size_t i = 0; i < pm2.size(); ++i)
				p[i] -= w * w * pm2[i];
		}
		pm2 = std::move(pm1);
		pm1 = std::move(p);
	}
	return pm1;
}

std::vector<double> poly_from_roots(const std::vector<double> &roots)
{
	std::vector<double> p{1.0};
	for (double r : roots) {
		std::vector<double> nx(p.size() + 1, 0.0);
		for (std::size_t i = 0; i < p.size(); ++i) {
			nx[i + 1] += p[i];
			nx[i] -= r * p[i];
		}
		p = std::move(nx);
	}
	return p;
}

std::string spectrum_report::to_json() const
{
	nlohmann::json j;
	j["family"] = family_name(family);
	j["count"] = count;
	j["trunc_sizes"] = trunc_sizes;
	j["max_deviation"] = max_deviation;
	j["noise_floor"] = noise_floor;
	j["decreasing"] = decreasing;
	j["flagged"] = !decreasing;
	j["final_deviation"] = final_deviation;
	if (family == Family::beta) {
		j["coeff_recurrence_vs_roots"] = coeff_recurrence_vs_roots;
		j["coeff_recurrence_vs_exact"] = coeff_recurrence_vs_exact;
		j["eig_vs_poly_roots"] = eig_vs_poly_roots;
	}
	return j.dump(2);
}

namespace
{

double rel_diff(double a, double b)
{
	return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double max_rel_diff(const std::vector<double> &a, const std::vector<double> &b)
{
	if (a.size() != b.size())
		return std::numeric_limits<double>::infinity();
	double m = 0;
	for (std::size_t i = 0; i < a.size(); ++i)
		m = std::max(m, rel_diff(a[i], b[i]));
	return m;
}

} // namespace

spectrum_report spectrum_root_agreement(const ensemble_spec &spec, int count, const std::vector<int> &trunc_sizes,
                                        double tol)
{
	spec.validate();
	spectrum_report rep;
	rep.family = spec.family;
	const jacobi_operator op(spec);
	if (spec.family == Family::beta) {
		const int M = *spec.M;
		rep.count = M;
		rep.trunc_sizes = {M};
		const auto eig = truncated_eigs(op, M, {}, 0);
		const auto rec = char_poly_from_recurrence(op);
		std::vector<double> exact;
		for (auto &q : beta_char_poly(spec))
			exact.push_back(to_double(q));
		rep.coeff_recurrence_vs_roots = max_rel_diff(rec, poly_from_roots(eig));
		rep.coeff_recurrence_vs_exact = max_rel_diff(rec, exact);
		const tridiagonal t(op, M);
		auto proots = polynomial_roots_by_scan(exact, t.hi + 1, M, tol);
		rep.eig_vs_poly_roots = max_rel_diff(eig, proots);
		rep.max_deviation = {rep.eig_vs_poly_roots};
		rep.noise_floor = {0};
		rep.final_deviation = rep.eig_vs_poly_roots;
		return rep;
	}
	rep.count = count;
	rep.trunc_sizes = trunc_sizes;
	const auto roots = find_roots(spec, count, tol).roots;
	for (int size : trunc_sizes) {
		const auto eig = truncated_eigs(op, size, count, 0);
		double dev = 0, mag = 1;
		for (int k = 0; k < count; ++k) {
			dev = std::max(dev, k < static_cast<int>(eig.size()) ? std::abs(eig[k] - roots[k])
			                                                     : std::numeric_limits<double>::infinity());
			mag = std::max(mag, std::abs(roots[k]));
		}
		rep.max_deviation.push_back(dev);
		// below this the comparison sees only rounding in the bisections
		rep.noise_floor.push_back(2 * tol + 1024 * eps * mag);
	}
	for (std::size_t i = 1; i < rep.max_deviation.size(); ++i)
		if (!(rep.max_deviation[i] < rep.max_deviation[i - 1] || rep.max_deviation[i] <= rep.noise_floor[i]))
			rep.decreasing = false;
	rep.final_deviation = rep.max_deviation.empty() ? 0 : rep.max_deviation.back();
	return rep;
}

} // namespace htjack
