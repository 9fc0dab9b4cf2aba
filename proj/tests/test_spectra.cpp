#include <doctest.h>

#include <cmath>

#include "htjack/errors.hpp"
#include "htjack/spectra.hpp"

using namespace htjack;

TEST_CASE("confluent series")
{
	CHECK(hyp1f1(2.5, 1.5, 0) == 1);
	for (double x : {-3.0, -0.5, 0.7, 2.0})
		CHECK(hyp1f1(1, 1, x) == doctest::Approx(std::exp(x)).epsilon(1e-14));
	// sum 2/((n+2) n!) telescopes to 2
	CHECK(hyp1f1(2, 3, 1) == doctest::Approx(2).epsilon(1e-14));
	CHECK_THROWS(hyp1f1(1, -2, 0.5));
}

TEST_CASE("Gauss series")
{
	const double g = 1.7, z = 2.3, c = 0.4;
	CHECK(hyp2f1(-1, g, z, c) == doctest::Approx(1 - g * c / z).epsilon(1e-15));
	for (double a : {0.5, 1.3, 2.0})
		CHECK(hyp2f1(a, 1.1, 1.1, 0.3) == doctest::Approx(std::pow(0.7, -a)).epsilon(1e-13));
	CHECK_THROWS(hyp2f1(0.5, 0.5, 1.5, 1.2));
	CHECK_NOTHROW(hyp2f1(-3, 0.5, 1.5, 1.2));
}

TEST_CASE("Pfaff transformation")
{
	for (double g : {0.5, 1.0, 2.0})
		for (double eta : {0.3, 1.0, 2.5})
			for (double c : {0.1, 0.3, 0.45})
				for (double z : {0.7, 1.5, 3.2}) {
					const double lhs = hyp2f1(g, eta, z, c / (c - 1));
					const double rhs = std::pow(1 - c, g) * hyp2f1(g, z - eta, z, c);
					CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
				}
}

TEST_CASE("contiguous relation")
{
	for (double a : {0.5, 1.5, 2.2})
		for (double b : {0.4, 1.0})
			for (double c : {1.3, 2.7})
				for (double x : {-0.4, 0.2, 0.6}) {
					const double r = (c - a) * hyp2f1(a - 1, b, c, x) + (2 * a - c + (b - a) * x) * hyp2f1(a, b, c, x) +
					                 a * (x - 1) * hyp2f1(a + 1, b, c, x);
					CHECK(std::abs(r) < 1e-10);
				}
}

TEST_CASE("reciprocal gamma")
{
	CHECK(rgamma(1) == doctest::Approx(1));
	CHECK(rgamma(5) == doctest::Approx(1.0 / 24));
	CHECK(rgamma(0.5) == doctest::Approx(1 / std::sqrt(M_PI)));
	CHECK(rgamma(0) == 0);
	CHECK(rgamma(-3) == 0);
	CHECK(rgamma(-0.5) == doctest::Approx(-1 / (2 * std::sqrt(M_PI))));
}

TEST_CASE("characteristic functions")
{
	const auto planch = ensemble_spec::planch(2, ratio(1, 2));
	for (double z : {0.3, 1.4, 2.6, 5.1})
		CHECK(char_fn(planch, z) == doctest::Approx(rgamma(z) * hyp1f1(2, z, -0.5)).epsilon(1e-12));

	const auto alpha = ensemble_spec::alpha(ratio(3, 2), ratio(2, 3), ratio(1, 4));
	for (double z : {0.3, 1.4, 2.6, 5.1}) {
		const double direct = char_fn(alpha, z);
		CHECK(direct == doctest::Approx(alpha_char_fn_2f1(alpha, z)).epsilon(1e-10));
		CHECK(direct == doctest::Approx(std::pow(0.75, 2.0 / 3) * rgamma(z) * hyp2f1(z - 1.5, 2.0 / 3, z, 0.25))
		                    .epsilon(1e-10));
	}

	const auto beta1 = ensemble_spec::beta(1, ratio(1, 2), 1);
	CHECK(beta_char_poly(beta1) == std::vector<Rational>{ratio(-1, 2), 1});
	for (int M = 1; M <= 8; ++M) {
		auto p = beta_char_poly(ensemble_spec::beta(ratio(3, 4), ratio(2, 5), M));
		CHECK(p.size() == static_cast<std::size_t>(M + 1));
		CHECK(p.back() == 1);
	}
	CHECK(char_fn(beta1, 0.5) == doctest::Approx(0).scale(1));
}

TEST_CASE("tridiagonal eigenvalues")
{
	const jacobi_operator b1(ensemble_spec::beta(1, ratio(1, 2), 1));
	CHECK(b1.finite_size() == 1);
	CHECK(truncated_eigs(b1, 1)[0] == doctest::Approx(0.5).epsilon(1e-14));

	const jacobi_operator b2(ensemble_spec::beta(ratio(3, 2), ratio(1, 3), 2));
	const double a = b2.diag(1), b = b2.diag(2), w = b2.offdiag(1);
	const double mid = (a + b) / 2, rad = std::sqrt((a - b) * (a - b) / 4 + w * w);
	const auto ev = truncated_eigs(b2, 2, {}, 0);
	CHECK(ev[0] == doctest::Approx(mid + rad).epsilon(1e-14));
	CHECK(ev[1] == doctest::Approx(mid - rad).epsilon(1e-14));

	const jacobi_operator p(ensemble_spec::planch(2, 1));
	const auto top = truncated_eigs(p, 200, 5);
	for (double e : top)
		CHECK(sturm_count(p, 200, e + 1e-8) - sturm_count(p, 200, e - 1e-8) == 1);
	CHECK(sturm_count(p, 200, top[0] + 1e-6) == 200);
}

TEST_CASE("roots")
{
	const auto b = find_roots(ensemble_spec::beta(1, ratio(1, 2), 1), 1);
	REQUIRE(b.roots.size() == 1);
	CHECK(b.roots[0] == doctest::Approx(0.5).epsilon(1e-13));

	const auto spec = ensemble_spec::planch(2, 1);
	const auto r = find_roots(spec, 31);
	CHECK(r.roots[0] <= 2);
	for (int k = 0; k + 1 < 31; ++k)
		CHECK(r.roots[k] >= 1 + r.roots[k + 1]);
	for (double x : r.roots) {
		const double lo = char_fn(spec, x - 1e-9), hi = char_fn(spec, x + 1e-9);
		CHECK(lo * hi <= 0);
	}
	CHECK_FALSE(r.asymptotics_conjectural);

	// |l_k - (1-k)| shrinks with k, as long as it is above rounding
	for (int k = 10; k < 31; ++k) {
		const double d0 = std::abs(r.roots[k - 1] - (1 - k)), d1 = std::abs(r.roots[k] - (-k));
		if (d0 < 1e-12 * k)
			break;
		CHECK(d1 < d0);
	}

	const auto tiny = find_roots(ensemble_spec::planch(1, ratio(1, 1000000)), 3);
	CHECK(tiny.roots[0] == doctest::Approx(1e-6).epsilon(1e-3));
	CHECK(tiny.roots[1] == doctest::Approx(-1).epsilon(1e-5));

	CHECK(find_roots(ensemble_spec::alpha(2, 1, ratio(1, 3)), 3).asymptotics_conjectural);
	CHECK_FALSE(find_roots(ensemble_spec::alpha(1, 1, ratio(1, 2)), 3).asymptotics_conjectural);
}

TEST_CASE("spectrum agrees with the zeros")
{
	const auto p = spectrum_root_agreement(ensemble_spec::planch(2, 1), 10, {500, 1000, 2000, 4000});
	CHECK(p.final_deviation < 1e-6);
	const auto a = spectrum_root_agreement(ensemble_spec::alpha(1, 1, ratio(1, 2)), 8, {500, 1000, 2000, 4000});
	CHECK(a.final_deviation < 1e-6);
	for (int M : {1, 3, 7, 12}) {
		const auto b = spectrum_root_agreement(ensemble_spec::beta(ratio(5, 4), ratio(2, 7), M), M, {M});
		CHECK(b.eig_vs_poly_roots < 1e-10);
		CHECK(b.coeff_recurrence_vs_roots < 1e-10);
		CHECK(b.coeff_recurrence_vs_exact < 1e-10);
	}
}
