#pragma once

#include <optional>
#include <string>
#include <vector>

#include "htjack/exactseries.hpp"
#include "htjack/rtransform.hpp"

namespace htjack
{

double hyp1f1(double a, double b, double x);
double hyp2f1(double a, double b, double c, double x);

// 1/Gamma(x), zero at the nonpositive integers.
double rgamma(double x);
// log|1/Gamma(x)| and its sign (0 at the poles of Gamma).
double log_abs_rgamma(double x, int &sign);

// value = mantissa * exp(log_scale); keeps the sign when the value itself
// would overflow.
struct scaled_value {
	double mantissa = 0;
	double log_scale = 0;
	double value() const;
	int sign() const
	{
		return (mantissa > 0) - (mantissa < 0);
	}
};

// The entire functions whose zeros are the Jacobi spectra:
//   planch: sum gamma^(n) (-eta)^n / (n! Gamma(z+n))
//   alpha:  (1-c)^gamma sum gamma^(n) (z-eta)^(n) c^n / (n! Gamma(z+n))
//   beta:   sum_{n<=M} (-M)^(n) gamma^(n) c^n / n! * (z+n)^(M-n)   (monic, degree M)
scaled_value char_fn_scaled(const ensemble_spec &spec, double z);
double char_fn(const ensemble_spec &spec, double z);

// Second displayed form of the alpha function: (1-c)^eta / Gamma(z) * 2F1(z-gamma, eta; z; c).
double alpha_char_fn_2f1(const ensemble_spec &spec, double z);

// Exact coefficients of the beta polynomial, constant term first.
std::vector<Rational> beta_char_poly(const ensemble_spec &spec);

class jacobi_operator
{
public:
	explicit jacobi_operator(const ensemble_spec &spec);

	Family family() const
	{
		return family_;
	}
	// 1-based; offdiag(i) couples rows i and i+1.
	double diag(int i) const;
	double offdiag(int i) const;
	std::optional<int> finite_size() const
	{
		return finite_size_;
	}

private:
	Family family_;
	double gamma_ = 0, eta_ = 0, c_ = 0;
	int M_ = 0;
	std::optional<int> finite_size_;
};

// Eigenvalues of the leading size x size block, decreasing. With `top`, only
// the largest `top` of them. Bisection on Sturm counts; abs_tol <= 0 means
// bisect down to adjacent doubles, otherwise stop at abs_tol * scale where
// scale = max|diag| + 2 max|offdiag|.
std::vector<double> truncated_eigs(const jacobi_operator &op, int size, std::optional<int> top = {},
                                   double abs_tol = 1e-12);

// Number of eigenvalues of the leading block strictly below x.
int sturm_count(const jacobi_operator &op, int size, double x);

// Doubles the truncation until the top `count` eigenvalues move by < tol/10.
int converged_truncation(const jacobi_operator &op, int count, double tol, int start = 64, int cap = 16384);

struct scan_point {
	double z;
	int sign;
};

struct root_list {
	std::vector<double> roots; // strictly decreasing
	ensemble_spec spec;
	bool asymptotics_conjectural = false;
	std::vector<int> outside_asymptotic_window; // indices n (1-based) with |l_n - (1-n)| > 1/2
	std::string to_csv() const;
};

inline constexpr double default_root_tol = 1e-13;

root_list find_roots(const ensemble_spec &spec, int count, double tol = default_root_tol);

// Real roots of a real polynomial (constant term first) with unit-separated
// roots below `hi`, by a sign scan with step 1/16 and bisection.
std::vector<double> polynomial_roots_by_scan(const std::vector<double> &coeffs, double hi, int count, double tol);

// det(zI - J) coefficients for the beta operator, via the three-term recurrence.
std::vector<double> char_poly_from_recurrence(const jacobi_operator &op);
// prod (z - r) expanded, constant term first.
std::vector<double> poly_from_roots(const std::vector<double> &roots);

struct spectrum_report {
	Family family;
	int count = 0;
	std::vector<int> trunc_sizes;
	std::vector<double> max_deviation; // per truncation size
	std::vector<double> noise_floor;   // per truncation size
	bool decreasing = true;            // false -> flagged
	double final_deviation = 0;
	// beta only
	double coeff_recurrence_vs_roots = 0;
	double coeff_recurrence_vs_exact = 0;
	double eig_vs_poly_roots = 0;
	std::string to_json() const;
};

spectrum_report spectrum_root_agreement(const ensemble_spec &spec, int count, const std::vector<int> &trunc_sizes,
                                        double tol = default_root_tol);

} // namespace htjack
