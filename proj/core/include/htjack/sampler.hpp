#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "htjack/exactseries.hpp"
#include "htjack/rtransform.hpp"

namespace htjack
{

// Parts are stored padded with zeros to length N.
using partition = std::vector<int>;

struct box_move {
	int row; // 0-based
	bool add;
	friend bool operator==(const box_move &, const box_move &) = default;
};

// Single-box additions at addable corners (rows < N) and removals at removable corners.
std::vector<box_move> proposals(const partition &lambda, int N);

bool is_partition(const partition &lambda, int N);

// log of the pure Jack weight; -inf outside the support.
//   planch: e^{-N eta} eta^{|l|} prod (N th + (j-1) - th(i-1)) / ((a + th l + th)(a + th l + 1))
//   alpha:  (1-c)^{N th L} c^{|l|} prod (L th + (j-1) - th(i-1))(N th + (j-1) - th(i-1)) / (same)
// with L = floor(eta/th), a = l_i - j, l = l'_j - i.
double log_weight(const partition &lambda, const ensemble_spec &spec, int N, const Rational &theta);

// The weight without its exponential prefactor (e^{-N eta}, resp. (1-c)^{N th L}),
// in exact arithmetic.
Rational box_product(const partition &lambda, const ensemble_spec &spec, int N, const Rational &theta);

struct partition_state {
	partition lambda;     // length N
	std::vector<int> conj; // conj[j-1] = number of rows with lambda_i >= j
	double cached_log_weight = 0;

	static partition_state empty(int N);
	static partition_state from(const partition &lambda);
	void apply(box_move m);
};

// Hook-factor tables for one (spec, N, theta); not shared between threads.
class weight_model
{
public:
	weight_model(const ensemble_spec &spec, int N, const Rational &theta);

	int N() const
	{
		return N_;
	}
	double log_weight(const partition &lambda);
	// log pi(lambda + box in `row`) - log pi(lambda); the box must be addable.
	double log_ratio_add(const partition_state &s, int row);

	struct step_law {
		double delta;      // log pi(target) - log pi(current)
		double log_accept; // min(0, delta + log #moves(current) - log #moves(target))
	};
	// Metropolis-Hastings acceptance for a uniformly proposed corner move.
	step_law evaluate(partition_state &s, box_move m);

private:
	double den(int arm, int leg);
	double num(int i, int j); // 1-based box

	ensemble_spec spec_;
	int N_;
	double theta_, base_, prefactor_;
	long L_ = -1; // alpha: floor(eta/theta)
	std::vector<std::vector<double>> den_; // by arm, then leg
	std::vector<std::vector<double>> num_; // by column, then row
};

int move_count(const partition_state &s, int N);

struct chain_config {
	ensemble_spec spec;
	int N = 1;
	Rational theta;
	long sweeps = 0; // Metropolis steps per chain
	long burn_in = 0;
	long thin = 1;
	std::uint64_t seed = 0;
	int chains = 4;

	// theta = gamma/N, burn-in 20%, about 1000 retained snapshots per chain.
	static chain_config defaults(const ensemble_spec &spec, int N, long sweeps, std::uint64_t seed, int chains = 4);
	void validate() const;
	std::string to_json() const;
};

struct chain_diagnostics {
	int chain = 0;
	long accepted = 0;
	double acceptance_rate = 0;
	int drift_checks = 0;
	int drift_violations = 0;
	double max_drift = 0;
	std::vector<double> log_weight_trace; // at each retained snapshot
	partition final_lambda;
};

struct snapshot {
	int chain;
	long sweep;
	partition lambda;
};

struct mcmc_result {
	chain_config config;
	std::vector<snapshot> snapshots;
	std::vector<chain_diagnostics> chains;

	// pooled shifted positions lambda_i - (i-1) theta
	std::vector<double> positions() const;
	std::string samples_csv() const;
	std::string diagnostics_json() const;
};

// Worker threads for independent jobs: HTJACK_THREADS if set, else the hardware count.
int worker_count();

inline constexpr long drift_interval = 10000;
inline constexpr double drift_tol = 1e-9;

mcmc_result mcmc_run(const chain_config &config, int threads = 0);

// One-step transition law from `lambda`; proposals leaving `inside` are rejected.
std::vector<std::pair<partition, double>> transition_row(weight_model &model, const partition &lambda,
                                                         const std::function<bool(const partition &)> &inside);

struct histogram_bin {
	double left;
	double width;
	std::size_t count;
};

// Bins [k w, (k+1) w), sorted by k; empty bins omitted.
std::vector<histogram_bin> histogram(const std::vector<double> &samples, double bin_width);

} // namespace htjack
