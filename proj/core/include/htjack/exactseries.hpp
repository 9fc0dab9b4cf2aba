#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace htjack
{

// GMP keeps mpq_class in canonical form after every arithmetic operation.
using Rational = mpq_class;

// Accepts "p", "p/q", "-1.25", "3e-2". Decimals are converted exactly.
Rational parse_rational(std::string_view s);
std::string to_string(const Rational &q);
double to_double(const Rational &q);
// p/q in lowest terms.
Rational ratio(long p, long q);

// x (x+1) ... (x+n-1)
Rational rising(const Rational &x, unsigned n);
Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);
Rational pow(const Rational &x, unsigned n);

enum class Basis {
	t_powers,    // sum a_n t^n / n!, stores a_n
	z_powers,    // sum b_n z^n
	zinv_powers, // sum b_n z^-n
	raising_inv  // sum b_n / z^(n)
};

std::string_view basis_name(Basis b);

inline constexpr unsigned default_order = 12;

class truncated_series
{
public:
	truncated_series(Basis b, unsigned order);
	truncated_series(Basis b, std::vector<Rational> coeffs);

	Basis basis() const
	{
		return basis_;
	}
	unsigned order() const
	{
		return static_cast<unsigned>(c_.size() - 1);
	}
	const std::vector<Rational> &coeffs() const
	{
		return c_;
	}
	const Rational &operator[](std::size_t n) const
	{
		return c_[n];
	}
	Rational &operator[](std::size_t n)
	{
		return c_[n];
	}

	// Index of the first nonzero coefficient, order()+1 if all vanish.
	unsigned valuation() const;
	truncated_series truncated(unsigned order) const;

	friend bool operator==(const truncated_series &, const truncated_series &) = default;

private:
	Basis basis_;
	std::vector<Rational> c_;
};

truncated_series operator+(const truncated_series &a, const truncated_series &b);
truncated_series operator-(const truncated_series &a, const truncated_series &b);
truncated_series operator*(const Rational &s, const truncated_series &a);

// Product in the basis of the operands (binomial convolution for t_powers,
// Cauchy product for z_powers / zinv_powers). The result keeps every
// coefficient that is determined by the known ones, so a factor with
// leading zeros does not cost precision.
truncated_series series_mul(const truncated_series &a, const truncated_series &b);
// b needs a nonzero constant term.
truncated_series series_div(const truncated_series &a, const truncated_series &b);
// Cancels the common power of the variable first; a must vanish to at
// least the order b does.
truncated_series shifted_divide(const truncated_series &a, const truncated_series &b);

truncated_series series_exp(const truncated_series &s);
truncated_series series_log(const truncated_series &s);

// sum a_n t^n/n!  ->  sum a_n z^-(n+1). The zinv result has order K+1.
truncated_series formal_laplace(const truncated_series &f);
truncated_series formal_laplace_inv(const truncated_series &g);

// g(z) -> g(z + x), re-expanded in powers of 1/z at the same order.
truncated_series shift_argument(const truncated_series &g, const Rational &x);

// e^{x t} as a t_powers series.
truncated_series exp_linear(const Rational &x, unsigned order);

Rational bernoulli(unsigned n);
// t / (1 - e^{-t}) = sum (-1)^m B_m t^m / m!
truncated_series bernoulli_kernel(unsigned order);

truncated_series raising_inv_to_zinv(const truncated_series &s);
truncated_series zinv_to_raising_inv(const truncated_series &s);

std::string series_to_json(const truncated_series &s);
truncated_series series_from_json(std::string_view json);

} // namespace htjack
