#include <doctest.h>

#include <algorithm>

#include "htjack/errors.hpp"
#include "htjack/shiftedjack.hpp"
#include "support.hpp"

using namespace htjack;
using test_support::random_rational;

TEST_CASE("row evaluations on small cases")
{
	const Rational th = ratio(2, 5);
	const std::vector<Rational> x{3, ratio(-1, 2), 7};
	CHECK(qstar_row({x, th, 0}) == 1);
	CHECK(qstar_row({x, th, 1}) == th * (x[0] + x[1] + x[2]));
	for (int k = 0; k <= 6; ++k) {
		const Rational xi = ratio(9, 2);
		Rational falling = 1;
		for (int j = 0; j < k; ++j)
			falling *= xi - j;
		CHECK(qstar_row({{xi}, th, k}) == rising(th, k) / factorial(k) * falling);
	}
	CHECK(qstar_row({{1, 2, 3}, ratio(1, 2), 2}) == ratio(15, 4));
}

TEST_CASE("table evaluation matches tuple enumeration")
{
	std::mt19937_64 rng(31);
	for (int trial = 0; trial < 30; ++trial) {
		const int N = 1 + trial % 5;
		std::vector<Rational> x;
		for (int i = 0; i < N; ++i)
			x.push_back(random_rational(rng, 8, 3));
		const Rational th = test_support::random_positive(rng, 3, 4);
		const int k = trial % 7;
		CHECK(qstar_row({x, th, k}) == qstar_row_enumerate({x, th, k}));
	}
}

TEST_CASE("row evaluation is symmetric in the shifted variables")
{
	// Q*(x) depends on x only through the multiset {x_i - i theta}.
	const Rational th = ratio(1, 3);
	std::vector<Rational> y{ratio(5, 2), -1, 4, 0};
	std::sort(y.begin(), y.end());
	auto at = [&](const std::vector<Rational> &yy) {
		std::vector<Rational> x;
		for (std::size_t i = 0; i < yy.size(); ++i)
			x.push_back(yy[i] + th * static_cast<long>(i + 1));
		return qstar_row({x, th, 4});
	};
	const Rational ref = at(y);
	do
		CHECK(at(y) == ref);
	while (std::next_permutation(y.begin(), y.end()));
	// plain permutations of x do move the value
	CHECK(qstar_row({{0, 1}, th, 2}) != qstar_row({{1, 0}, th, 2}));
}

TEST_CASE("budget guard")
{
	std::vector<Rational> x(30, 1);
	CHECK_THROWS_AS(qstar_row_enumerate({x, 1, 12}, 1000), resource_error);
	CHECK_THROWS_AS(qstar_row({x, 1, 40}, 1000), resource_error);
}

TEST_CASE("gamma product identity")
{
	auto zero = gamma_product_check({0, 0, 0}, ratio(1, 2), 10, 10);
	CHECK(zero.lhs == doctest::Approx(1).epsilon(1e-14));
	CHECK(zero.rhs == doctest::Approx(1).epsilon(1e-14));
	CHECK(gamma_product_check({2}, ratio(1, 2), 10, 30).abs_err < 1e-10);
	auto r = gamma_product_check({3, 1, 0}, ratio(1, 3), 12, 40);
	CHECK(r.abs_err < 1e-8);
	CHECK(r.pass);
	CHECK_THROWS_AS(gamma_product_check({3, 1, 0}, ratio(1, 3), 3, 10), precondition_error);
}

TEST_CASE("partial sums approach the product")
{
	// non-integer input: the series does not terminate
	auto r = gamma_product_check({ratio(1, 2), ratio(-1, 3)}, ratio(1, 2), 20, 40);
	const auto &e = r.partial_errors;
	CHECK(e.back() < 1e-8);
	for (std::size_t k = 20; k + 1 < e.size(); ++k)
		CHECK(e[k + 1] <= e[k] * (1 + 1e-12) + 1e-15);
}

TEST_CASE("replicated partitions")
{
	CHECK(replicate_partition({2, 1}, 2, 5) == std::vector<int>{2, 2, 2, 1, 1});
	CHECK(replicate_partition({1}, 1, 3) == std::vector<int>{1, 1, 1});
}

TEST_CASE("c_k limit along growing N")
{
	auto a = ck_limit_experiment({1}, 1, {10, 20, 40}, 1);
	CHECK(a.decreasing);
	auto b = ck_limit_experiment({2, 1}, 2, {10, 20, 40}, 2);
	CHECK(b.decreasing);
	auto e = ck_limit_experiment({}, 1, {10, 20}, 1);
	for (auto &c : e.predicted_c)
		CHECK(c == 0);
}
