#include "htjack/cumulants.hpp"

#include <string>

#include "htjack/errors.hpp"

namespace htjack
{

bool is_lukasiewicz(const lukasiewicz_path &p)
{
	long h = 0;
	for (int s : p.steps) {
		if (s < -1)
			return false;
		h += s;
		if (h < 0)
			return false;
	}
	return h == 0 && !p.steps.empty();
}

namespace
{

void check_length(int length, int max_length)
{
	if (length < 1)
		throw precondition_error("path length must be >= 1");
	if (length > max_length)
		throw resource_error("path length " + std::to_string(length) + " exceeds the enumeration cap "
		                     + std::to_string(max_length));
}

void walk(std::vector<int> &steps, int pos, int height, int length, std::vector<lukasiewicz_path> &out)
{
	if (pos == length) {
		out.push_back({steps});
		return;
	}
	const int remaining = length - pos;
	// After this step we need height' <= remaining - 1 to get back down.
	for (int s = -1; height + s <= remaining - 1; ++s) {
		if (height + s < 0)
			continue;
		steps[pos] = s;
		walk(steps, pos + 1, height + s, length, out);
	}
}

} // namespace

std::vector<lukasiewicz_path> enumerate_paths(int length, int max_length)
{
	check_length(length, max_length);
	std::vector<lukasiewicz_path> out;
	std::vector<int> steps(length);
	walk(steps, 0, 0, length, out);
	return out;
}

Rational divided_difference_power(const Rational &x, unsigned p, const Rational &gamma)
{
	return (pow(x, p) - pow(Rational(x - gamma), p)) / gamma;
}

namespace
{

void need_kappa(const cumulant_vector &kv, std::size_t n)
{
	if (kv.kappa.size() < n)
		throw precondition_error("need kappa_" + std::to_string(n) + ", have " + std::to_string(kv.kappa.size()));
}

Rational flat_at_zero_factor(const cumulant_vector &kv, unsigned h0)
{
	return divided_difference_power(kv.kappa[0], h0 + 1, kv.gamma) / (h0 + 1);
}

} // namespace

Rational path_weight(const lukasiewicz_path &p, const cumulant_vector &kv)
{
	if (!is_lukasiewicz(p))
		throw precondition_error("not a Lukasiewicz path");
	need_kappa(kv, 1);
	Rational w = 1;
	unsigned h0 = 0;
	int h = 0;
	for (int s : p.steps) {
		if (s == 0) {
			if (h == 0)
				++h0;
			else
				w *= kv.kappa[0] + h;
		} else if (s > 0) {
			need_kappa(kv, static_cast<std::size_t>(s) + 1);
			w *= kv.kappa[s - 1] + kv.kappa[s];
		} else {
			w *= h + kv.gamma;
		}
		h += s;
	}
	return w * flat_at_zero_factor(kv, h0);
}

namespace
{

struct path_summer {
	const cumulant_vector &kv;
	int length;
	std::vector<Rational> by_h0; // summed weights, split by number of flat steps at height 0
	std::vector<Rational> up;    // kappa_j + kappa_{j+1}

	void go(int pos, int height, unsigned h0, const Rational &w)
	{
		if (pos == length) {
			by_h0[h0] += w;
			return;
		}
		const int remaining = length - pos;
		if (height > 0)
			go(pos + 1, height - 1, h0, w * (height + kv.gamma));
		if (height <= remaining - 1) {
			if (height == 0)
				go(pos + 1, 0, h0 + 1, w);
			else
				go(pos + 1, height, h0, w * (kv.kappa[0] + height));
		}
		for (int j = 1; height + j <= remaining - 1; ++j)
			go(pos + 1, height + j, h0, w * up[j - 1]);
	}
};

} // namespace

Rational path_sum(const cumulant_vector &kv, int length, int max_length)
{
	check_length(length, max_length);
	need_kappa(kv, static_cast<std::size_t>(length));
	path_summer ps{kv, length, std::vector<Rational>(length + 1), {}};
	for (int j = 1; j < length; ++j)
		ps.up.push_back(kv.kappa[j - 1] + kv.kappa[j]);
	ps.go(0, 0, 0, Rational(1));
	Rational m = 0;
	for (unsigned h0 = 0; h0 <= static_cast<unsigned>(length); ++h0)
		if (ps.by_h0[h0] != 0)
			m += ps.by_h0[h0] * flat_at_zero_factor(kv, h0);
	return m;
}

moment_vector moments_from_cumulants(const cumulant_vector &kv, int lmax, int max_length)
{
	if (kv.gamma <= 0)
		throw parameter_error("gamma must be positive");
	check_length(lmax, max_length);
	need_kappa(kv, static_cast<std::size_t>(lmax));
	moment_vector mv;
	for (int l = 1; l <= lmax; ++l)
		mv.m.push_back(path_sum(kv, l, max_length));
	return mv;
}

cumulant_vector cumulants_from_moments(const moment_vector &mv, const Rational &gamma, int lmax, int max_length)
{
	if (gamma <= 0)
		throw parameter_error("gamma must be positive");
	check_length(lmax, max_length);
	if (mv.m.size() < static_cast<std::size_t>(lmax))
		throw precondition_error("not enough moments");
	// m_l = (gamma+1)^(l-1) kappa_l + (terms in kappa_1..kappa_{l-1}); solve row by row.
	cumulant_vector kv{gamma, std::vector<Rational>(lmax)};
	for (int l = 1; l <= lmax; ++l) {
		kv.kappa[l - 1] = 0;
		auto rest = path_sum(kv, l, max_length);
		kv.kappa[l - 1] = (mv.m[l - 1] - rest) / rising(gamma + 1, l - 1);
	}
	return kv;
}

} // namespace htjack
