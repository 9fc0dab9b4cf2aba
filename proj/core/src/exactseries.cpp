#include "htjack/exactseries.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include <json.hpp>

#include "htjack/errors.hpp"

namespace htjack
{

Rational parse_rational(std::string_view s)
{
	auto fail = [&] { return precondition_error("not a rational number: '" + std::string(s) + "'"); };
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
		s.remove_prefix(1);
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
		s.remove_suffix(1);
	if (s.empty())
		throw fail();

	if (auto slash = s.find('/'); slash != std::string_view::npos) {
		Rational q;
		try {
			mpz_class num(std::string(s.substr(0, slash))), den(std::string(s.substr(slash + 1)));
			if (den == 0)
				throw fail();
			q = Rational(num, den);
		} catch (const std::invalid_argument &) {
			throw fail();
		}
		q.canonicalize();
		return q;
	}

	// Decimal with optional exponent: [+-]digits[.digits][(e|E)[+-]digits]
	std::size_t i = 0;
	bool neg = false;
	if (s[i] == '+' || s[i] == '-')
		neg = s[i++] == '-';
	std::string digits;
	long scale = 0;
	bool any = false, dot = false;
	for (; i < s.size(); ++i) {
		char ch = s[i];
		if (std::isdigit(static_cast<unsigned char>(ch))) {
			digits += ch;
			any = true;
			if (dot)
				--scale;
		} else if (ch == '.' && !dot) {
			dot = true;
		} else {
			break;
		}
	}
	if (!any)
		throw fail();
	if (i < s.size()) {
		if (s[i] != 'e' && s[i] != 'E')
			throw fail();
		long e = 0;
		auto rest = s.substr(i + 1);
		if (!rest.empty() && rest.front() == '+')
			rest.remove_prefix(1);
		auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
		if (ec != std::errc{} || p != rest.data() + rest.size())
			throw fail();
		scale += e;
	}
	mpz_class n(digits), p10;
	mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
	Rational q = scale < 0 ? Rational(n, p10) : Rational(n * p10);
	q.canonicalize();
	return neg ? Rational(-q) : q;
}

std::string to_string(const Rational &q)
{
	return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

double to_double(const Rational &q)
{
	// mpq_get_d truncates; this is fine at the precision we need downstream.
	return q.get_d();
}

Rational ratio(long p, long q)
{
	if (q == 0)
		throw precondition_error("zero denominator");
	Rational r(p);
	r /= q;
	return r;
}

Rational rising(const Rational &x, unsigned n)
{
	Rational r = 1;
	for (unsigned i = 0; i < n; ++i)
		r *= x + i;
	return r;
}

Rational factorial(unsigned n)
{
	mpz_class f;
	mpz_fac_ui(f.get_mpz_t(), n);
	return Rational(f);
}

Rational binomial(unsigned n, unsigned k)
{
	mpz_class b;
	mpz_bin_uiui(b.get_mpz_t(), n, k);
	return Rational(b);
}

Rational pow(const Rational &x, unsigned n)
{
	Rational r;
	mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), n);
	mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), n);
	r.canonicalize();
	return r;
}

std::string_view basis_name(Basis b)
{
	switch (b) {
	case Basis::t_powers:
		return "t_powers";
	case Basis::z_powers:
		return "z_powers";
	case Basis::zinv_powers:
		return "zinv_powers";
	case Basis::raising_inv:
		return "raising_inv";
	}
	return "?";
}

truncated_series::truncated_series(Basis b, unsigned order) : basis_(b), c_(order + 1) {}

truncated_series::truncated_series(Basis b, std::vector<Rational> coeffs) : basis_(b), c_(std::move(coeffs))
{
	if (c_.empty())
		throw precondition_error("series needs at least a constant coefficient");
}

unsigned truncated_series::valuation() const
{
	unsigned v = 0;
	while (v < c_.size() && c_[v] == 0)
		++v;
	return v;
}

truncated_series truncated_series::truncated(unsigned order) const
{
	if (order > this->order())
		throw precondition_error("cannot extend a truncated series");
	return truncated_series(basis_, std::vector<Rational>(c_.begin(), c_.begin() + order + 1));
}

namespace
{

void same_basis(const truncated_series &a, const truncated_series &b)
{
	if (a.basis() != b.basis())
		throw precondition_error("series bases differ");
}

bool is_egf(Basis b)
{
	return b == Basis::t_powers;
}

void multipliable(const truncated_series &a)
{
	if (a.basis() == Basis::raising_inv)
		throw precondition_error("no product in the inverse raising factorial basis");
}

} // namespace

truncated_series operator+(const truncated_series &a, const truncated_series &b)
{
	same_basis(a, b);
	truncated_series r(a.basis(), std::min(a.order(), b.order()));
	for (unsigned n = 0; n <= r.order(); ++n)
		r[n] = a[n] + b[n];
	return r;
}

truncated_series operator-(const truncated_series &a, const truncated_series &b)
{
	same_basis(a, b);
	truncated_series r(a.basis(), std::min(a.order(), b.order()));
	for (unsigned n = 0; n <= r.order(); ++n)
		r[n] = a[n] - b[n];
	return r;
}

truncated_series operator*(const Rational &s, const truncated_series &a)
{
	auto r = a;
	for (unsigned n = 0; n <= r.order(); ++n)
		r[n] *= s;
	return r;
}

truncated_series series_mul(const truncated_series &a, const truncated_series &b)
{
	same_basis(a, b);
	multipliable(a);
	const unsigned va = std::min(a.valuation(), a.order() + 1), vb = std::min(b.valuation(), b.order() + 1);
	const unsigned order = std::min(a.order() + vb, b.order() + va);
	const bool egf = is_egf(a.basis());
	truncated_series r(a.basis(), order);
	for (unsigned n = 0; n <= order; ++n) {
		Rational s = 0;
		for (unsigned k = 0; k <= n; ++k) {
			if (k > a.order() || n - k > b.order())
				continue;
			if (a[k] == 0 || b[n - k] == 0)
				continue;
			if (egf)
				s += binomial(n, k) * a[k] * b[n - k];
			else
				s += a[k] * b[n - k];
		}
		r[n] = s;
	}
	return r;
}

truncated_series series_div(const truncated_series &a, const truncated_series &b)
{
	same_basis(a, b);
	multipliable(a);
	if (b[0] == 0)
		throw precondition_error("division by a series with zero constant term; use shifted_divide");
	const unsigned order = std::min(a.order(), b.order());
	const bool egf = is_egf(a.basis());
	truncated_series q(a.basis(), order);
	for (unsigned n = 0; n <= order; ++n) {
		Rational s = a[n];
		for (unsigned k = 0; k < n; ++k)
			s -= (egf ? binomial(n, k) : Rational(1)) * q[k] * b[n - k];
		q[n] = s / b[0];
	}
	return q;
}

namespace
{

// Divide by the variable v times: a_n -> a_{n+v}, adjusted for the EGF scaling.
truncated_series drop_leading(const truncated_series &a, unsigned v)
{
	truncated_series r(a.basis(), a.order() - v);
	for (unsigned n = 0; n <= r.order(); ++n) {
		r[n] = a[n + v];
		if (is_egf(a.basis()))
			r[n] *= factorial(n) / factorial(n + v);
	}
	return r;
}

} // namespace

truncated_series shifted_divide(const truncated_series &a, const truncated_series &b)
{
	same_basis(a, b);
	multipliable(a);
	const unsigned v = b.valuation();
	if (v > b.order())
		throw precondition_error("division by the zero series");
	for (unsigned n = 0; n < v; ++n)
		if (n <= a.order() && a[n] != 0)
			throw precondition_error("numerator does not vanish to the order of the divisor");
	if (v > a.order())
		throw precondition_error("numerator truncated below the divisor valuation");
	return series_div(drop_leading(a, v), drop_leading(b, v));
}

truncated_series series_exp(const truncated_series &s)
{
	if (s.basis() != Basis::z_powers && s.basis() != Basis::t_powers && s.basis() != Basis::zinv_powers)
		throw precondition_error("exp needs a power basis");
	if (s[0] != 0)
		throw precondition_error("exp needs a zero constant term");
	const unsigned K = s.order();
	truncated_series e(s.basis(), K);
	e[0] = 1;
	if (is_egf(s.basis())) {
		// e' = s' e  ->  e_n = sum_{k=1}^n C(n-1,k-1) s_k e_{n-k}
		for (unsigned n = 1; n <= K; ++n) {
			Rational acc = 0;
			for (unsigned k = 1; k <= n; ++k)
				if (s[k] != 0)
					acc += binomial(n - 1, k - 1) * s[k] * e[n - k];
			e[n] = acc;
		}
	} else {
		// n e_n = sum_{k=1}^n k s_k e_{n-k}
		for (unsigned n = 1; n <= K; ++n) {
			Rational acc = 0;
			for (unsigned k = 1; k <= n; ++k)
				if (s[k] != 0)
					acc += k * s[k] * e[n - k];
			e[n] = acc / n;
		}
	}
	return e;
}

truncated_series series_log(const truncated_series &s)
{
	if (s.basis() != Basis::z_powers && s.basis() != Basis::t_powers && s.basis() != Basis::zinv_powers)
		throw precondition_error("log needs a power basis");
	if (s[0] != 1)
		throw precondition_error("log needs constant term 1");
	const unsigned K = s.order();
	truncated_series l(s.basis(), K);
	if (is_egf(s.basis())) {
		for (unsigned n = 1; n <= K; ++n) {
			Rational acc = s[n];
			for (unsigned k = 1; k < n; ++k)
				acc -= binomial(n - 1, k - 1) * l[k] * s[n - k];
			l[n] = acc;
		}
	} else {
		for (unsigned n = 1; n <= K; ++n) {
			Rational acc = 0;
			for (unsigned k = 1; k < n; ++k)
				acc += k * l[k] * s[n - k];
			l[n] = s[n] - acc / n;
		}
	}
	return l;
}

truncated_series formal_laplace(const truncated_series &f)
{
	if (f.basis() != Basis::t_powers)
		throw precondition_error("formal Laplace transform acts on t-series");
	truncated_series g(Basis::zinv_powers, f.order() + 1);
	for (unsigned n = 0; n <= f.order(); ++n)
		g[n + 1] = f[n];
	return g;
}

truncated_series formal_laplace_inv(const truncated_series &g)
{
	if (g.basis() != Basis::zinv_powers)
		throw precondition_error("inverse formal Laplace transform acts on 1/z-series");
	if (g[0] != 0)
		throw precondition_error("inverse formal Laplace transform needs a zero constant term");
	if (g.order() == 0)
		throw precondition_error("inverse formal Laplace transform needs order >= 1");
	truncated_series f(Basis::t_powers, g.order() - 1);
	for (unsigned n = 0; n <= f.order(); ++n)
		f[n] = g[n + 1];
	return f;
}

truncated_series shift_argument(const truncated_series &g, const Rational &x)
{
	if (g.basis() != Basis::zinv_powers)
		throw precondition_error("argument shift acts on 1/z-series");
	// (z+x)^-k = z^-k sum_j C(-k, j) (x/z)^j = z^-k sum_j (-1)^j C(k+j-1, j) x^j z^-j
	const unsigned K = g.order();
	truncated_series r(Basis::zinv_powers, K);
	r[0] = g[0];
	for (unsigned k = 1; k <= K; ++k) {
		if (g[k] == 0)
			continue;
		Rational xp = 1;
		for (unsigned j = 0; k + j <= K; ++j) {
			Rational term = binomial(k + j - 1, j) * xp * g[k];
			r[k + j] += (j % 2 ? -term : term);
			xp *= x;
		}
	}
	return r;
}

truncated_series exp_linear(const Rational &x, unsigned order)
{
	truncated_series e(Basis::t_powers, order);
	Rational p = 1;
	for (unsigned n = 0; n <= order; ++n, p *= x)
		e[n] = p;
	return e;
}

truncated_series bernoulli_kernel(unsigned order)
{
	// (1 - e^{-t}) / t has EGF coefficients (-1)^n / (n+1); invert it.
	truncated_series d(Basis::t_powers, order);
	for (unsigned n = 0; n <= order; ++n)
		d[n] = ratio(n % 2 ? -1 : 1, n + 1);
	truncated_series one(Basis::t_powers, order);
	one[0] = 1;
	return series_div(one, d);
}

Rational bernoulli(unsigned n)
{
	Rational b = bernoulli_kernel(n)[n];
	return n % 2 ? Rational(-b) : b;
}

namespace
{

// Row n holds the 1/z expansion of 1/z^(n) up to z^-K.
std::vector<std::vector<Rational>> raising_table(unsigned K)
{
	std::vector<std::vector<Rational>> T(K + 1, std::vector<Rational>(K + 1));
	T[0][0] = 1;
	for (unsigned n = 0; n < K; ++n) {
		// 1/z^(n+1) = 1/z^(n) * w / (1 + n w), w = 1/z
		Rational carry = 0;
		for (unsigned k = 0; k < K; ++k) {
			carry = T[n][k] - n * carry;
			T[n + 1][k + 1] = carry;
		}
	}
	return T;
}

} // namespace

truncated_series raising_inv_to_zinv(const truncated_series &s)
{
	if (s.basis() != Basis::raising_inv)
		throw precondition_error("expected an inverse raising factorial series");
	const unsigned K = s.order();
	auto T = raising_table(K);
	truncated_series r(Basis::zinv_powers, K);
	for (unsigned n = 0; n <= K; ++n) {
		if (s[n] == 0)
			continue;
		for (unsigned k = n; k <= K; ++k)
			r[k] += s[n] * T[n][k];
	}
	return r;
}

truncated_series zinv_to_raising_inv(const truncated_series &s)
{
	if (s.basis() != Basis::zinv_powers)
		throw precondition_error("expected a 1/z-series");
	const unsigned K = s.order();
	auto T = raising_table(K);
	truncated_series b(Basis::raising_inv, K);
	for (unsigned k = 0; k <= K; ++k) {
		Rational acc = s[k];
		for (unsigned n = 0; n < k; ++n)
			acc -= b[n] * T[n][k];
		b[k] = acc;
	}
	return b;
}

std::string series_to_json(const truncated_series &s)
{
	nlohmann::json j;
	j["basis"] = basis_name(s.basis());
	j["order"] = s.order();
	auto &c = j["coeffs"] = nlohmann::json::array();
	for (auto &q : s.coeffs())
		c.push_back(to_string(q));
	return j.dump();
}

truncated_series series_from_json(std::string_view text)
{
	auto j = nlohmann::json::parse(text);
	const auto name = j.at("basis").get<std::string>();
	Basis b;
	if (name == "t_powers")
		b = Basis::t_powers;
	else if (name == "z_powers")
		b = Basis::z_powers;
	else if (name == "zinv_powers")
		b = Basis::zinv_powers;
	else if (name == "raising_inv")
		b = Basis::raising_inv;
	else
		throw precondition_error("unknown basis " + name);
	std::vector<Rational> c;
	for (auto &x : j.at("coeffs"))
		c.push_back(parse_rational(x.get<std::string>()));
	if (c.size() != j.at("order").get<std::size_t>() + 1)
		throw precondition_error("series order does not match coefficient count");
	return truncated_series(b, std::move(c));
}

} // namespace htjack
