#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "htjack/errors.hpp"
#include "htjack/sampler.hpp"
#include "support.hpp"

using namespace htjack;

namespace
{

bool contains(const std::vector<box_move> &moves, box_move m)
{
	return std::find(moves.begin(), moves.end(), m) != moves.end();
}

} // namespace

TEST_CASE("Plancherel weights")
{
	const auto spec = ensemble_spec::planch(2, ratio(3, 2));
	CHECK(log_weight({0, 0, 0}, spec, 3, ratio(2, 3)) == doctest::Approx(-4.5));
	for (int N : {1, 4, 9}) {
		partition one(N, 0);
		one[0] = 1;
		CHECK(log_weight(one, spec, N, ratio(1, 5)) == doctest::Approx(-1.5 * N + std::log(1.5 * N)));
	}
	// N = 1 is Poisson(eta)
	for (int k = 0; k <= 6; ++k) {
		CHECK(box_product({k}, spec, 1, ratio(1, 3)) == pow(ratio(3, 2), k) / factorial(k));
		CHECK(log_weight({k}, spec, 1, ratio(1, 3)) ==
		      doctest::Approx(-1.5 + k * std::log(1.5) - std::lgamma(k + 1.0)));
	}
	CHECK_THROWS_AS(log_weight({1, 2}, spec, 2, 1), precondition_error);
}

TEST_CASE("alpha weights vanish beyond the allowed length")
{
	const auto spec = ensemble_spec::alpha(1, ratio(1, 2), ratio(1, 3));
	// theta = 1/4: floor(eta/theta) = 2 rows
	CHECK(std::isfinite(log_weight({3, 1, 0}, spec, 3, ratio(1, 4))));
	CHECK(log_weight({3, 1, 1}, spec, 3, ratio(1, 4)) == -INFINITY);
}

TEST_CASE("log weight matches the exact box product")
{
	std::mt19937_64 rng(41);
	const auto spec = ensemble_spec::planch(1, ratio(2, 3));
	const Rational th = ratio(1, 4);
	for (auto &p : test_support::partitions_up_to(7)) {
		if (p.size() > 4)
			continue;
		partition l = p;
		l.resize(4, 0);
		const double expect = -4 * (2.0 / 3) + std::log(to_double(box_product(l, spec, 4, th)));
		CHECK(log_weight(l, spec, 4, th) == doctest::Approx(expect).epsilon(1e-12));
	}
}

TEST_CASE("corner proposals")
{
	CHECK(proposals({0, 0, 0}, 3).size() == 1);
	const auto m = proposals({2, 1, 0, 0}, 4);
	int add = 0, rem = 0;
	for (auto x : m)
		(x.add ? add : rem)++;
	CHECK(add == 3);
	CHECK(rem == 2);
	// every move can be undone from the target
	for (auto &p : test_support::partitions_up_to(6)) {
		if (p.size() > 4)
			continue;
		partition l = p;
		l.resize(4, 0);
		for (auto mv : proposals(l, 4)) {
			auto s = partition_state::from(l);
			s.apply(mv);
			CHECK(is_partition(s.lambda, 4));
			CHECK(contains(proposals(s.lambda, 4), box_move{mv.row, !mv.add}));
		}
	}
	CHECK(move_count(partition_state::from({2, 1, 0, 0}), 4) == 5);
}

TEST_CASE("incremental ratios match full recomputation")
{
	// eta / theta = 6 rows allowed
	const auto spec = ensemble_spec::alpha(2, 2, ratio(1, 2));
	weight_model w(spec, 6, ratio(1, 3));
	auto s = partition_state::from({3, 2, 2, 0, 0, 0});
	for (int row : {0, 1, 3}) {
		auto t = s;
		t.apply({row, true});
		CHECK(w.log_ratio_add(s, row) == doctest::Approx(w.log_weight(t.lambda) - w.log_weight(s.lambda)));
	}
}

TEST_CASE("detailed balance on a truncated state space")
{
	for (const auto &spec : {ensemble_spec::planch(1, 1), ensemble_spec::alpha(1, 1, ratio(1, 2))}) {
		const int N = 2;
		weight_model w(spec, N, ratio(1, 2));
		std::vector<partition> states;
		for (int a = 0; a <= 4; ++a)
			for (int b = 0; b <= a; ++b)
				states.push_back({a, b});
		auto inside = [](const partition &l) { return l[0] <= 4; };
		std::map<partition, std::size_t> index;
		for (std::size_t i = 0; i < states.size(); ++i)
			index[states[i]] = i;
		std::vector<std::vector<double>> P(states.size(), std::vector<double>(states.size(), 0));
		for (std::size_t i = 0; i < states.size(); ++i)
			for (auto &[t, p] : transition_row(w, states[i], inside))
				P[i][index.at(t)] += p;
		const auto pi = test_support::stationary(P);
		std::vector<double> wt;
		for (auto &s : states)
			wt.push_back(std::exp(w.log_weight(s)));
		const double Z = std::accumulate(wt.begin(), wt.end(), 0.0);
		for (std::size_t i = 0; i < states.size(); ++i) {
			CHECK(std::abs(pi[i] - wt[i] / Z) < 1e-10);
			for (std::size_t j = 0; j < states.size(); ++j)
				CHECK(std::abs(wt[i] * P[i][j] - wt[j] * P[j][i]) < 1e-12 * Z);
		}
	}
}

TEST_CASE("histogram bins")
{
	CHECK(histogram({}, 0.5).empty());
	auto one = histogram({1.2, 1.2, 1.2}, 0.5);
	REQUIRE(one.size() == 1);
	CHECK(one[0].count == 3);
	CHECK(one[0].left == doctest::Approx(1.0));
	std::vector<double> xs{-1.3, -0.2, 0, 0.1, 0.49, 0.5, 3.7};
	auto h = histogram(xs, 0.5);
	std::size_t total = 0;
	for (auto &b : h)
		total += b.count;
	CHECK(total == xs.size());
	CHECK(h.front().left == doctest::Approx(-1.5));
	CHECK_THROWS(histogram(xs, 0));
}

TEST_CASE("chains are reproducible and keep their caches honest")
{
	auto cfg = chain_config::defaults(ensemble_spec::planch(2, 1), 20, 30000, 7, 2);
	const auto a = mcmc_run(cfg, 1);
	const auto b = mcmc_run(cfg, 1);
	CHECK(a.positions() == b.positions());
	CHECK(a.samples_csv() == b.samples_csv());
	for (auto &c : a.chains) {
		CHECK(c.drift_violations == 0);
		CHECK(c.drift_checks > 0);
		CHECK(c.acceptance_rate > 0);
	}
	CHECK(cfg.theta == ratio(1, 10));
	CHECK(cfg.burn_in == 6000);
	cfg.seed = 8;
	CHECK(mcmc_run(cfg, 1).positions() != a.positions());
}

TEST_CASE("chain configuration validation")
{
	auto cfg = chain_config::defaults(ensemble_spec::beta(1, ratio(1, 2), 2), 10, 1000, 1);
	CHECK_THROWS_AS(cfg.validate(), parameter_error);
	auto ok = chain_config::defaults(ensemble_spec::planch(1, 1), 10, 1000, 1);
	ok.burn_in = 1000;
	CHECK_THROWS_AS(ok.validate(), parameter_error);
}
