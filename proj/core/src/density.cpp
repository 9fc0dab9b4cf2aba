#include "htjack/density.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "htjack/errors.hpp"

namespace htjack
{

namespace
{

struct builder {
	double gamma, root_tol;
	crystal_density d;
	double total = 0;

	// returns the interval length
	double add(double a, double b)
	{
		if (b < a - root_tol) {
			nlohmann::json j{{"a", a}, {"b", b}, {"masses", d.interval_masses}};
			throw computation_error("density interval inverted (interlacing violated)", j.dump());
		}
		const double len = b - a;
		if (len <= root_tol) {
			++d.dropped_degenerate;
			return std::max(len, 0.0);
		}
		d.intervals.push_back({a, b});
		d.interval_masses.push_back(len / gamma);
		total += len / gamma;
		return len;
	}
};

} // namespace

crystal_density build_density(const ensemble_spec &spec, const root_list &roots, double mass_tol, double root_tol)
{
	spec.validate();
	const double g = to_double(spec.gamma);
	const auto &l = roots.roots;
	if (l.empty())
		throw precondition_error("density needs at least one root");
	builder bd{g, root_tol, {}};
	bd.d.gamma = g;
	bd.add(-g, -l[0]);

	if (spec.family == Family::beta) {
		const int M = *spec.M;
		if (static_cast<int>(l.size()) != M)
			throw precondition_error("beta density needs exactly M roots");
		for (int k = 1; k < M; ++k)
			bd.add(1 - l[k - 1], -l[k]);
		bd.add(1 - l[M - 1], M);
	} else {
		std::size_t used = 1;
		bool done = false;
		for (std::size_t k = 1; k < l.size() && !done; ++k) {
			const double len = bd.add(1 - l[k - 1], -l[k]);
			used = k + 1;
			done = len < mass_tol / 10 && bd.total >= 1 - mass_tol;
		}
		const double K = static_cast<double>(used);
		bd.d.truncation_residual = std::max(0.0, (l[used - 1] - (1 - K)) / g);
	}

	const double defect = std::abs(bd.total + bd.d.truncation_residual - 1);
	if (defect > mass_tol || bd.d.truncation_residual > mass_tol) {
		nlohmann::json j{{"mass", bd.total},
		                 {"residual", bd.d.truncation_residual},
		                 {"mass_tol", mass_tol},
		                 {"masses", bd.d.interval_masses}};
		throw computation_error("density mass check failed", j.dump());
	}
	return bd.d;
}

double mass(const crystal_density &d)
{
	double m = 0;
	for (auto &iv : d.intervals)
		m += (iv.b - iv.a) / d.gamma;
	return m;
}

double density_at(const crystal_density &d, double x)
{
	for (auto &iv : d.intervals)
		if (x >= iv.a && x <= iv.b)
			return d.height();
	return 0;
}

double cdf(const crystal_density &d, double x)
{
	double m = 0;
	for (auto &iv : d.intervals) {
		if (x <= iv.a)
			break;
		m += (std::min(x, iv.b) - iv.a) / d.gamma;
	}
	return m;
}

double moment(const crystal_density &d, int n)
{
	// (b^{n+1} - a^{n+1}) / (n+1) = (b - a) * sum_j a^j b^{n-j} / (n+1)
	double m = 0;
	for (auto &iv : d.intervals) {
		double s = 0, ap = 1;
		for (int j = 0; j <= n; ++j, ap *= iv.a)
			s += ap * std::pow(iv.b, n - j);
		m += (iv.b - iv.a) * s / (n + 1);
	}
	return m / d.gamma;
}

std::complex<double> charfn(const crystal_density &d, double t)
{
	// int_a^b e^{itx} dx = e^{it(a+b)/2} (b - a) sinc(t(b-a)/2)
	std::complex<double> s = 0;
	for (auto &iv : d.intervals) {
		const double half = t * (iv.b - iv.a) / 2;
		const double sinc = std::abs(half) < 1e-8 ? 1 - half * half / 6 : std::sin(half) / half;
		s += std::polar((iv.b - iv.a) * sinc, t * (iv.a + iv.b) / 2);
	}
	return s / d.gamma;
}

double ks_distance(const crystal_density &d, const std::vector<double> &x)
{
	if (x.empty())
		throw precondition_error("KS distance needs samples");
	const double n = static_cast<double>(x.size());
	double best = 0;
	for (std::size_t i = 0; i < x.size();) {
		std::size_t j = i;
		while (j < x.size() && x[j] == x[i])
			++j;
		const double F = cdf(d, x[i]);
		best = std::max({best, std::abs(F - i / n), std::abs(F - j / n)});
		i = j;
	}
	return best;
}

gap_summary support_gaps(const crystal_density &d)
{
	gap_summary g{std::numeric_limits<double>::infinity(), 0};
	for (std::size_t i = 1; i < d.intervals.size(); ++i) {
		const double gap = d.intervals[i].a - d.intervals[i - 1].b;
		g.min_gap = std::min(g.min_gap, gap);
		g.max_defect = std::max(g.max_defect, std::abs(gap - std::round(gap)));
	}
	return g;
}

std::string density_to_json(const crystal_density &d, const std::string &config_json)
{
	nlohmann::json j;
	j["config"] = nlohmann::json::parse(config_json);
	j["gamma"] = d.gamma;
	auto &iv = j["intervals"] = nlohmann::json::array();
	for (auto &i : d.intervals)
		iv.push_back({i.a, i.b});
	j["residual"] = d.truncation_residual;
	j["dropped_degenerate"] = d.dropped_degenerate;
	return j.dump(2);
}

crystal_density density_from_json(const std::string &text)
{
	auto j = nlohmann::json::parse(text);
	crystal_density d;
	d.gamma = j.at("gamma").get<double>();
	for (auto &i : j.at("intervals"))
		d.intervals.push_back({i.at(0).get<double>(), i.at(1).get<double>()});
	d.truncation_residual = j.value("residual", 0.0);
	d.dropped_degenerate = j.value("dropped_degenerate", 0);
	for (auto &i : d.intervals)
		d.interval_masses.push_back((i.b - i.a) / d.gamma);
	if (d.gamma <= 0)
		throw precondition_error("density gamma must be positive");
	for (std::size_t i = 0; i < d.intervals.size(); ++i)
		if (d.intervals[i].b < d.intervals[i].a || (i > 0 && d.intervals[i].a <= d.intervals[i - 1].b))
			throw precondition_error("density intervals must be sorted and disjoint");
	return d;
}

std::string density_to_csv(const crystal_density &d, int points, const std::string &config_json)
{
	std::ostringstream os;
	os.precision(12);
	os << "# " << nlohmann::json::parse(config_json).dump() << "\nx,f\n";
	if (d.intervals.empty() || points < 2)
		return os.str();
	const double lo = d.intervals.front().a - 0.5, hi = d.intervals.back().b + 0.5;
	for (int i = 0; i < points; ++i) {
		const double x = lo + (hi - lo) * i / (points - 1);
		os << x << ',' << density_at(d, x) << '\n';
	}
	return os.str();
}

std::string overlay_svg(const crystal_density &d, const std::vector<bar> &bars, const std::string &title,
                        const std::string &config_json)
{
	constexpr double W = 800, H = 400, m = 60;
	double xmin = 0, xmax = 0, ymax = d.height();
	bool have = false;
	auto extend = [&](double a, double b) {
		xmin = have ? std::min(xmin, a) : a;
		xmax = have ? std::max(xmax, b) : b;
		have = true;
	};
	for (auto &iv : d.intervals)
		extend(iv.a, iv.b);
	for (auto &b : bars) {
		extend(b.left, b.right);
		ymax = std::max(ymax, b.height);
	}
	xmin -= 0.5;
	xmax += 0.5;
	ymax *= 1.15;
	auto X = [&](double x) { return m + (x - xmin) / (xmax - xmin) * (W - 2 * m); };
	auto Y = [&](double y) { return (H - m) - y / ymax * (H - 2 * m); };

	std::ostringstream os;
	os.precision(6);
	os << std::fixed;
	const int Wi = static_cast<int>(W), Hi = static_cast<int>(H);
	os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Wi << "\" height=\"" << Hi << "\" viewBox=\"0 0 " << Wi
	   << ' ' << Hi << "\">\n";
	os << "<!-- config: " << nlohmann::json::parse(config_json).dump() << " -->\n";
	os << "<rect x=\"0\" y=\"0\" width=\"" << Wi << "\" height=\"" << Hi << "\" fill=\"white\"/>\n";
	os << "<text x=\"" << Wi / 2 << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
	os << "<g id=\"histogram\" fill=\"#4a7fc1\" fill-opacity=\"0.6\">\n";
	for (auto &b : bars)
		os << "<rect x=\"" << X(b.left) << "\" y=\"" << Y(b.height) << "\" width=\"" << X(b.right) - X(b.left)
		   << "\" height=\"" << Y(0) - Y(b.height) << "\"/>\n";
	os << "</g>\n";

	os << "<polyline id=\"density\" fill=\"none\" stroke=\"#2a9d3a\" stroke-width=\"2\" points=\"";
	os << X(xmin) << ',' << Y(0);
	for (auto &iv : d.intervals)
		os << ' ' << X(iv.a) << ',' << Y(0) << ' ' << X(iv.a) << ',' << Y(d.height()) << ' ' << X(iv.b) << ','
		   << Y(d.height()) << ' ' << X(iv.b) << ',' << Y(0);
	os << ' ' << X(xmax) << ',' << Y(0) << "\"/>\n";

	os << "<g id=\"axes\" stroke=\"black\" font-size=\"11\">\n";
	os << "<line x1=\"" << m << "\" y1=\"" << Y(0) << "\" x2=\"" << W - m << "\" y2=\"" << Y(0) << "\"/>\n";
	os << "<line x1=\"" << m << "\" y1=\"" << Y(0) << "\" x2=\"" << m << "\" y2=\"" << m << "\"/>\n";
	for (double t = std::ceil(xmin); t <= xmax; t += 1)
		os << "<line x1=\"" << X(t) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(t) << "\" y2=\"" << Y(0) + 5
		   << "\"/><text x=\"" << X(t) << "\" y=\"" << Y(0) + 18 << "\" text-anchor=\"middle\" stroke=\"none\">"
		   << static_cast<long>(t) << "</text>\n";
	for (int i = 0; i <= 4; ++i) {
		const double y = ymax * i / 4;
		os << "<line x1=\"" << m - 5 << "\" y1=\"" << Y(y) << "\" x2=\"" << m << "\" y2=\"" << Y(y)
		   << "\"/><text x=\"" << m - 8 << "\" y=\"" << Y(y) + 4 << "\" text-anchor=\"end\" stroke=\"none\">"
		   << std::setprecision(3) << y << std::setprecision(6) << "</text>\n";
	}
	os << "</g>\n</svg>\n";
	return os.str();
}

} // namespace htjack
