#include <doctest.h>

#include <cmath>
#include <random>

#include "htjack/cumulants.hpp"
#include "htjack/density.hpp"
#include "htjack/errors.hpp"
#include "htjack/rtransform.hpp"
#include "htjack/spectra.hpp"

using namespace htjack;

namespace
{

crystal_density uniform(double g)
{
	crystal_density d;
	d.gamma = g;
	d.intervals = {{-g, 0}};
	d.interval_masses = {1};
	return d;
}

} // namespace

TEST_CASE("uniform law queries")
{
	const auto d = uniform(2);
	CHECK(mass(d) == doctest::Approx(1));
	for (int n = 1; n <= 6; ++n)
		CHECK(moment(d, n) == doctest::Approx(std::pow(-2.0, n) / (n + 1)));
	CHECK(cdf(d, -3) == 0);
	CHECK(cdf(d, -1) == doctest::Approx(0.5));
	CHECK(cdf(d, 1) == 1);
	CHECK(density_at(d, -0.5) == doctest::Approx(0.5));
	CHECK(density_at(d, 0.5) == 0);
	CHECK(std::abs(charfn(d, 0) - std::complex<double>(1, 0)) < 1e-15);
	for (double t = -20; t <= 20; t += 0.37)
		CHECK(std::abs(charfn(d, t)) <= 1 + 1e-12);
	// E e^{itX} for X uniform on [-2, 0]
	const double t = 1.3;
	const std::complex<double> expect = (1.0 - std::exp(std::complex<double>(0, -2 * t))) / std::complex<double>(0, 2 * t);
	CHECK(std::abs(charfn(d, t) - expect) < 1e-14);
}

TEST_CASE("Kolmogorov-Smirnov distance")
{
	const auto d = uniform(1);
	const int n = 200;
	std::vector<double> q;
	for (int i = 0; i < n; ++i)
		q.push_back(-1 + (i + 0.5) / n);
	CHECK(ks_distance(d, q) <= 0.5 / n + 1e-12);
	std::vector<double> far(n, 5.0);
	CHECK(ks_distance(d, far) >= 1 - 1.0 / n);
	std::vector<double> ties{-0.5, -0.5, -0.5, -0.5};
	CHECK(ks_distance(d, ties) == doctest::Approx(0.5));
}

TEST_CASE("beta with one particle")
{
	const auto spec = ensemble_spec::beta(1, ratio(1, 2), 1);
	const auto d = build_density(spec, find_roots(spec, 1));
	REQUIRE(d.intervals.size() == 2);
	CHECK(d.intervals[0].a == doctest::Approx(-1));
	CHECK(d.intervals[0].b == doctest::Approx(-0.5));
	CHECK(d.intervals[1].a == doctest::Approx(0.5));
	CHECK(d.intervals[1].b == doctest::Approx(1));
	CHECK(d.interval_masses[0] == doctest::Approx(0.5));
	CHECK(mass(d) == doctest::Approx(1).epsilon(1e-12));
	CHECK(std::abs(moment(d, 1)) < 1e-12);
	CHECK(moment(d, 2) == doctest::Approx(7.0 / 12).epsilon(1e-12));
}

TEST_CASE("densities reproduce the low exact moments")
{
	// The tail beyond the last interval carries truncation_residual of mass at
	// ever larger x, so only low moments are compared at this precision.
	struct ref {
		ensemble_spec spec;
		int n_max;
		double tol;
	};
	const std::vector<ref> refs{{ensemble_spec::planch(2, 1), 4, 1e-5},
	                            {ensemble_spec::planch(2, ratio(1, 2)), 4, 1e-5},
	                            {ensemble_spec::alpha(1, 1, ratio(1, 2)), 2, 1e-5},
	                            {ensemble_spec::beta(ratio(3, 2), ratio(1, 3), 5), 6, 1e-10}};
	for (const auto &[spec, n_max, tol] : refs) {
		const int count = spec.family == Family::beta ? *spec.M : 64;
		const auto d = build_density(spec, find_roots(spec, count));
		const auto m = moments_from_cumulants(family_cumulants(spec, 6), 6).m;
		for (int n = 1; n <= n_max; ++n)
			CHECK(std::abs(moment(d, n) - to_double(m[n - 1])) < tol * std::max(1.0, std::abs(to_double(m[n - 1]))));
		CHECK(mass(d) + d.truncation_residual == doctest::Approx(1).epsilon(1e-8));
		const auto gaps = support_gaps(d);
		CHECK(gaps.max_defect < 1e-10);
		CHECK(gaps.min_gap > 1 - 1e-10);
	}
}

TEST_CASE("the eta -> 0 roots collapse to one interval")
{
	root_list r;
	r.spec = ensemble_spec::planch(2, ratio(1, 1000));
	for (int k = 1; k <= 10; ++k)
		r.roots.push_back(1 - k);
	const auto d = build_density(r.spec, r);
	REQUIRE(d.intervals.size() == 1);
	CHECK(d.intervals[0].a == -2);
	CHECK(d.intervals[0].b == 0);
	CHECK(d.truncation_residual == doctest::Approx(0).scale(1));
}

TEST_CASE("broken interlacing is reported")
{
	root_list r;
	r.spec = ensemble_spec::planch(2, 1);
	r.roots = {1, -0.5, -0.8, -3};
	CHECK_THROWS_AS(build_density(r.spec, r), computation_error);
}

TEST_CASE("serialization")
{
	const auto spec = ensemble_spec::planch(2, ratio(1, 2));
	const auto d = build_density(spec, find_roots(spec, 40));
	const auto back = density_from_json(density_to_json(d, R"({"tag":1})"));
	REQUIRE(back.intervals.size() == d.intervals.size());
	for (std::size_t i = 0; i < d.intervals.size(); ++i) {
		CHECK(back.intervals[i].a == d.intervals[i].a);
		CHECK(back.intervals[i].b == d.intervals[i].b);
	}
	CHECK(back.gamma == d.gamma);
	CHECK(back.truncation_residual == d.truncation_residual);

	const auto csv = density_to_csv(d, 50, R"({"tag":1})");
	CHECK(csv.rfind("# ", 0) == 0);
	CHECK(csv.find("x,f\n") != std::string::npos);

	const auto svg = overlay_svg(d, {{0, 0.5, 0.3}}, "t", R"({"tag":1})");
	CHECK(svg.find("<svg") != std::string::npos);
	CHECK(svg.find("viewBox=\"0 0 800 400\"") != std::string::npos);
	CHECK(svg.find("</svg>") != std::string::npos);
}
