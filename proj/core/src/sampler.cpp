#include "htjack/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "htjack/errors.hpp"

namespace htjack
{

namespace
{

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void check_family(const ensemble_spec &spec)
{
	spec.validate();
	if (spec.family == Family::beta)
		throw parameter_error("sampling supports planch and alpha only");
}

int length_of(const partition &l)
{
	int n = 0;
	while (n < static_cast<int>(l.size()) && l[n] > 0)
		++n;
	return n;
}

std::vector<int> conjugate(const partition &l)
{
	std::vector<int> c(l.empty() ? 0 : std::max(l[0], 0), 0);
	for (int x : l)
		for (int j = 0; j < x; ++j)
			++c[j];
	return c;
}

long alpha_rows(const ensemble_spec &spec, const Rational &theta)
{
	mpz_class q;
	const Rational r = *spec.eta / theta;
	mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
	return q.get_si();
}

} // namespace

bool is_partition(const partition &lambda, int N)
{
	if (static_cast<int>(lambda.size()) > N)
		return false;
	for (std::size_t i = 0; i < lambda.size(); ++i)
		if (lambda[i] < 0 || (i > 0 && lambda[i] > lambda[i - 1]))
			return false;
	return true;
}

std::vector<box_move> proposals(const partition &lambda, int N)
{
	std::vector<box_move> out;
	const int n = static_cast<int>(lambda.size());
	auto part = [&](int i) { return i < n ? lambda[i] : 0; };
	for (int r = 0; r < N; ++r) {
		if (r == 0 || part(r - 1) > part(r))
			out.push_back({r, true});
		if (part(r) == 0)
			break;
	}
	for (int r = 0; r < n; ++r)
		if (part(r) > 0 && part(r + 1) < part(r))
			out.push_back({r, false});
	return out;
}

double log_weight(const partition &lambda, const ensemble_spec &spec, int N, const Rational &theta)
{
	weight_model m(spec, N, theta);
	return m.log_weight(lambda);
}

Rational box_product(const partition &lambda, const ensemble_spec &spec, int N, const Rational &theta)
{
	check_family(spec);
	if (!is_partition(lambda, N))
		throw precondition_error("not a partition with at most N parts");
	const auto conj = conjugate(lambda);
	const bool alpha = spec.family == Family::alpha;
	const long L = alpha ? alpha_rows(spec, theta) : 0;
	Rational w = 1;
	for (int i = 1; i <= static_cast<int>(lambda.size()); ++i)
		for (int j = 1; j <= lambda[i - 1]; ++j) {
			const int arm = lambda[i - 1] - j, leg = conj[j - 1] - i;
			Rational numer = N * theta + (j - 1) - theta * (i - 1);
			if (alpha)
				numer *= L * theta + (j - 1) - theta * (i - 1);
			w *= (alpha ? *spec.c : *spec.eta) * numer
			     / ((arm + theta * leg + theta) * (arm + theta * leg + 1));
		}
	return w;
}

partition_state partition_state::empty(int N)
{
	return {partition(N, 0), {}, 0};
}

partition_state partition_state::from(const partition &lambda)
{
	return {lambda, conjugate(lambda), 0};
}

void partition_state::apply(box_move m)
{
	if (m.add) {
		const int c = lambda[m.row]++; // 0-based column of the new box
		if (c == static_cast<int>(conj.size()))
			conj.push_back(0);
		++conj[c];
	} else {
		const int c = --lambda[m.row];
		if (--conj[c] == 0)
			conj.pop_back();
	}
}

weight_model::weight_model(const ensemble_spec &spec, int N, const Rational &theta) : spec_(spec), N_(N)
{
	check_family(spec);
	if (N < 1)
		throw parameter_error("N must be >= 1");
	if (theta <= 0)
		throw parameter_error("theta must be positive");
	theta_ = to_double(theta);
	if (spec.family == Family::planch) {
		const double eta = to_double(*spec.eta);
		base_ = std::log(eta);
		prefactor_ = -N * eta;
	} else {
		L_ = alpha_rows(spec, theta);
		const double c = to_double(*spec.c);
		base_ = std::log(c);
		// N theta L is exact in rationals; take the double afterwards
		prefactor_ = to_double(Rational(N * theta * L_)) * std::log1p(-c);
	}
}

double weight_model::den(int arm, int leg)
{
	if (arm >= static_cast<int>(den_.size()))
		den_.resize(arm + 1);
	auto &row = den_[arm];
	if (row.empty()) {
		row.resize(N_ + 1);
		for (int l = 0; l <= N_; ++l) {
			const double h = arm + theta_ * l;
			row[l] = std::log(h + theta_) + std::log(h + 1);
		}
	}
	return row[leg];
}

double weight_model::num(int i, int j)
{
	if (j > static_cast<int>(num_.size()))
		num_.resize(j);
	auto &col = num_[j - 1];
	if (col.empty()) {
		col.resize(N_ + 1);
		for (int r = 1; r <= N_; ++r) {
			const double shift = (j - 1) - theta_ * (r - 1);
			double v = std::log(N_ * theta_ + shift);
			if (L_ >= 0) {
				// the factor L th + (j-1) - th(i-1) vanishes exactly at (i, j) = (L+1, 1)
				const double f = (r == L_ + 1 && j == 1) ? 0.0 : L_ * theta_ + shift;
				v = f > 0 ? v + std::log(f) : neg_inf;
			}
			col[r] = v;
		}
	}
	return col[i];
}

double weight_model::log_weight(const partition &lambda)
{
	if (!is_partition(lambda, N_))
		throw precondition_error("not a partition with at most N parts");
	if (L_ >= 0 && length_of(lambda) > std::min<long>(N_, L_))
		return neg_inf;
	const auto conj = conjugate(lambda);
	// compensated sum over boxes
	double s = prefactor_, comp = 0;
	auto add = [&](double x) {
		const double t = s + x;
		comp += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
		s = t;
	};
	for (int i = 1; i <= static_cast<int>(lambda.size()); ++i)
		for (int j = 1; j <= lambda[i - 1]; ++j) {
			add(base_ + num(i, j));
			add(-den(lambda[i - 1] - j, conj[j - 1] - i));
		}
	return s + comp;
}

double weight_model::log_ratio_add(const partition_state &s, int row)
{
	const int i1 = row + 1, c1 = s.lambda[row] + 1;
	double n = num(i1, c1);
	if (!std::isfinite(n))
		return neg_inf;
	double d = base_ + n - den(0, 0);
	// boxes left of the new one: arm grows by one
	for (int j = 1; j < c1; ++j) {
		const int arm = s.lambda[row] - j, leg = s.conj[j - 1] - i1;
		d -= den(arm + 1, leg) - den(arm, leg);
	}
	// boxes above it: leg grows by one (rows 1..row all reach column c1)
	for (int i = 1; i <= row; ++i) {
		const int arm = s.lambda[i - 1] - c1, leg = row - i;
		d -= den(arm, leg + 1) - den(arm, leg);
	}
	return d;
}

int move_count(const partition_state &s, int N)
{
	// addable: row 0 plus the row below each removable corner (if < N)
	int removable = 0, addable = 1;
	const int w = static_cast<int>(s.conj.size());
	for (int j = 0; j < w; ++j) {
		const int below = j + 1 < w ? s.conj[j + 1] : 0;
		if (s.conj[j] > below) {
			++removable;
			if (s.conj[j] < N)
				++addable;
		}
	}
	return addable + removable;
}

weight_model::step_law weight_model::evaluate(partition_state &s, box_move m)
{
	const int before = move_count(s, N_);
	double delta;
	if (m.add) {
		delta = log_ratio_add(s, m.row);
		s.apply(m);
	} else {
		s.apply(m);
		delta = -log_ratio_add(s, m.row);
	}
	const int after = move_count(s, N_);
	s.apply({m.row, !m.add});
	if (!std::isfinite(delta))
		return {delta, neg_inf};
	return {delta, std::min(0.0, delta + std::log(static_cast<double>(before)) - std::log(static_cast<double>(after)))};
}

chain_config chain_config::defaults(const ensemble_spec &spec, int N, long sweeps, std::uint64_t seed, int chains)
{
	chain_config c{spec, N, Rational(spec.gamma / N), sweeps, sweeps / 5, 1, seed, chains};
	c.thin = std::max(1L, (sweeps - c.burn_in) / 1000);
	return c;
}

void chain_config::validate() const
{
	check_family(spec);
	if (N < 1)
		throw parameter_error("N must be >= 1");
	if (theta <= 0)
		throw parameter_error("theta must be positive");
	if (sweeps <= burn_in || burn_in < 0)
		throw parameter_error("sweeps must exceed burn_in");
	if (thin < 1)
		throw parameter_error("thin must be >= 1");
	if (chains < 1)
		throw parameter_error("chains must be >= 1");
}

std::string chain_config::to_json() const
{
	nlohmann::json j;
	j["spec"] = nlohmann::json::parse(spec.to_json());
	j["N"] = N;
	j["theta"] = htjack::to_string(theta);
	j["sweeps"] = sweeps;
	j["burn_in"] = burn_in;
	j["thin"] = thin;
	j["seed"] = seed;
	j["chains"] = chains;
	return j.dump();
}

std::vector<double> mcmc_result::positions() const
{
	const double th = to_double(config.theta);
	std::vector<double> out;
	out.reserve(snapshots.size() * config.N);
	for (auto &s : snapshots)
		for (int i = 0; i < config.N; ++i)
			out.push_back(s.lambda[i] - i * th);
	return out;
}

std::string mcmc_result::samples_csv() const
{
	const double th = to_double(config.theta);
	std::ostringstream os;
	os.precision(17);
	os << "# " << config.to_json() << "\nchain,sweep,particle_index,position\n";
	for (auto &s : snapshots)
		for (int i = 0; i < config.N; ++i)
			os << s.chain << ',' << s.sweep << ',' << i + 1 << ',' << s.lambda[i] - i * th << '\n';
	return os.str();
}

std::string mcmc_result::diagnostics_json() const
{
	nlohmann::json j;
	j["config"] = nlohmann::json::parse(config.to_json());
	auto &cs = j["chains"] = nlohmann::json::array();
	for (auto &c : chains)
		cs.push_back({{"chain", c.chain},
		              {"accepted", c.accepted},
		              {"acceptance_rate", c.acceptance_rate},
		              {"drift_checks", c.drift_checks},
		              {"drift_violations", c.drift_violations},
		              {"max_drift", c.max_drift},
		              {"log_weight_trace", c.log_weight_trace}});
	return j.dump(2);
}

int worker_count()
{
	if (const char *env = std::getenv("HTJACK_THREADS")) {
		const int n = std::atoi(env);
		if (n >= 1)
			return n;
	}
	return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

double unit_uniform(std::mt19937_64 &rng)
{
	return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64 &rng, std::size_t n)
{
	return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

struct chain_output {
	chain_diagnostics diag;
	std::vector<snapshot> snaps;
};

chain_output run_chain(const chain_config &cfg, int chain)
{
	weight_model model(cfg.spec, cfg.N, cfg.theta);
	std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(chain) + 1)));
	auto s = partition_state::empty(cfg.N);
	s.cached_log_weight = model.log_weight(s.lambda);
	chain_output out;
	out.diag.chain = chain;
	long since_check = 0;
	for (long step = 1; step <= cfg.sweeps; ++step) {
		auto moves = proposals(s.lambda, cfg.N);
		const auto m = moves[pick(rng, moves.size())];
		const auto law = model.evaluate(s, m);
		if (std::isfinite(law.log_accept) && std::log(unit_uniform(rng)) < law.log_accept) {
			s.apply(m);
			s.cached_log_weight += law.delta;
			++out.diag.accepted;
			if (++since_check == drift_interval) {
				since_check = 0;
				const double full = model.log_weight(s.lambda);
				const double drift = std::abs(full - s.cached_log_weight);
				++out.diag.drift_checks;
				out.diag.max_drift = std::max(out.diag.max_drift, drift);
				if (drift > drift_tol * std::max(1.0, std::abs(full)))
					++out.diag.drift_violations;
				s.cached_log_weight = full;
			}
		}
		if (step > cfg.burn_in && (step - cfg.burn_in) % cfg.thin == 0) {
			out.snaps.push_back({chain, step, s.lambda});
			out.diag.log_weight_trace.push_back(s.cached_log_weight);
		}
	}
	out.diag.acceptance_rate = static_cast<double>(out.diag.accepted) / static_cast<double>(cfg.sweeps);
	out.diag.final_lambda = s.lambda;
	return out;
}

} // namespace

mcmc_result mcmc_run(const chain_config &config, int threads)
{
	config.validate();
	if (threads <= 0)
		threads = worker_count();
	std::vector<chain_output> outs(config.chains);
	std::vector<std::exception_ptr> errors(config.chains);
	for (int first = 0; first < config.chains; first += threads) {
		std::vector<std::thread> pool;
		const int last = std::min(config.chains, first + threads);
		for (int c = first; c < last; ++c)
			pool.emplace_back([&, c] {
				try {
					outs[c] = run_chain(config, c);
				} catch (...) {
					errors[c] = std::current_exception();
				}
			});
		for (auto &t : pool)
			t.join();
	}
	for (auto &e : errors)
		if (e)
			std::rethrow_exception(e);
	mcmc_result r{config, {}, {}};
	for (auto &o : outs) {
		r.chains.push_back(std::move(o.diag));
		r.snapshots.insert(r.snapshots.end(), std::make_move_iterator(o.snaps.begin()),
		                   std::make_move_iterator(o.snaps.end()));
	}
	return r;
}

std::vector<std::pair<partition, double>> transition_row(weight_model &model, const partition &lambda,
                                                         const std::function<bool(const partition &)> &inside)
{
	auto s = partition_state::from(lambda);
	const auto moves = proposals(s.lambda, model.N());
	const double q = 1.0 / static_cast<double>(moves.size());
	std::vector<std::pair<partition, double>> row;
	double stay = 1;
	for (auto m : moves) {
		auto t = s;
		t.apply(m);
		if (!inside(t.lambda))
			continue;
		const double p = q * std::exp(model.evaluate(s, m).log_accept);
		row.emplace_back(t.lambda, p);
		stay -= p;
	}
	row.emplace_back(lambda, stay);
	return row;
}

std::vector<histogram_bin> histogram(const std::vector<double> &samples, double bin_width)
{
	if (!(bin_width > 0))
		throw precondition_error("bin width must be positive");
	std::map<long, std::size_t> counts;
	for (double x : samples)
		++counts[static_cast<long>(std::floor(x / bin_width))];
	std::vector<histogram_bin> out;
	for (auto [k, n] : counts)
		out.push_back({k * bin_width, bin_width, n});
	return out;
}

} // namespace htjack
