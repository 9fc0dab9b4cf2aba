#pragma once

#include <optional>
#include <string>
#include <vector>

#include "htjack/cumulants.hpp"
#include "htjack/exactseries.hpp"

namespace htjack
{

enum class Family { planch, alpha, beta };

std::string family_name(Family f);
Family parse_family(const std::string &s);

struct ensemble_spec {
	Family family;
	Rational gamma;
	std::optional<Rational> eta; // planch, alpha
	std::optional<Rational> c;   // alpha, beta
	std::optional<int> M;        // beta

	static ensemble_spec planch(Rational gamma, Rational eta);
	static ensemble_spec alpha(Rational gamma, Rational eta, Rational c);
	static ensemble_spec beta(Rational gamma, Rational c, int M);

	// Throws parameter_error on out-of-range or family-irrelevant fields.
	void validate() const;
	std::string to_json() const;
};

struct c_sequence {
	std::vector<Rational> c; // c[0] is c_1
};

cumulant_vector family_cumulants(const ensemble_spec &spec, int n_max);

c_sequence kappa_to_c(const cumulant_vector &kv, int K);
cumulant_vector c_to_kappa(const c_sequence &cs, const Rational &gamma, int K);

// ln(1 + sum (-1)^n c_n / z^(n)) = L{(gamma M(-t) - (e^{gamma t}-1)/t) / (1 - e^{-t})}(z)
moment_vector c_to_m(const c_sequence &cs, const Rational &gamma, int lmax);
c_sequence m_to_c(const moment_vector &mv, const Rational &gamma, int K);

// Same relation written with the Bernoulli kernel:
// 1 + sum (-1)^n c_n / z^(n)
//   = exp(gamma L{ t/(1-e^{-t}) sum_{n>=1} ((-1)^n m_n/n! - gamma^n/(n+1)!) t^{n-1} }(z))
moment_vector c_to_m_bernoulli(const c_sequence &cs, const Rational &gamma, int lmax);
c_sequence m_to_c_bernoulli(const moment_vector &mv, const Rational &gamma, int K);

struct equivalence_row {
	int ell;
	Rational paths;
	Rational transform;
	bool equal;
};

struct equivalence_report {
	Rational gamma;
	int lmax = 0;
	std::vector<equivalence_row> results;
	std::optional<int> first_mismatch;

	bool all_equal() const
	{
		return !first_mismatch;
	}
	std::string to_json() const;
};

equivalence_report equivalence_check(const cumulant_vector &kv, int lmax);

} // namespace htjack
