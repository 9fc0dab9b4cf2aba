#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "htjack/cumulants.hpp"
#include "htjack/density.hpp"
#include "htjack/errors.hpp"
#include "htjack/exactseries.hpp"
#include "htjack/rtransform.hpp"
#include "htjack/sampler.hpp"
#include "htjack/shiftedjack.hpp"
#include "htjack/spectra.hpp"

namespace htjack::cli
{

namespace
{

using json = nlohmann::json;

struct family_flags {
	std::string family;
	std::optional<std::string> gamma, eta, c;
	std::optional<int> M;

	void attach(CLI::App *sub, bool required = true)
	{
		auto *f = sub->add_option("--family", family, "planch | alpha | beta");
		if (required)
			f->required();
		sub->add_option("--gamma", gamma, "gamma > 0, as p/q or decimal");
		sub->add_option("--eta", eta, "eta > 0 (planch, alpha)");
		sub->add_option("--c", c, "c in (0,1) (alpha, beta)");
		sub->add_option("--M", M, "M >= 1 (beta)");
	}

	ensemble_spec spec() const
	{
		if (!gamma)
			throw parameter_error("--gamma is required");
		ensemble_spec s{parse_family(family), parse_rational(*gamma), {}, {}, {}};
		if (eta)
			s.eta = parse_rational(*eta);
		if (c)
			s.c = parse_rational(*c);
		s.M = M;
		s.validate();
		return s;
	}
};

std::vector<std::string> split(const std::string &s, char sep = ',')
{
	std::vector<std::string> out;
	std::stringstream ss(s);
	std::string item;
	while (std::getline(ss, item, sep))
		if (!item.empty())
			out.push_back(item);
	return out;
}

std::vector<Rational> rational_list(const std::string &s)
{
	std::vector<Rational> out;
	for (auto &x : split(s))
		out.push_back(parse_rational(x));
	return out;
}

std::string fmt_double(double x)
{
	std::ostringstream os;
	os.precision(17);
	os << x;
	// prefer the shortest representation that round-trips
	for (int p = 1; p <= 17; ++p) {
		std::ostringstream t;
		t.precision(p);
		t << x;
		if (std::stod(t.str()) == x)
			return t.str();
	}
	return os.str();
}

struct output {
	std::optional<std::string> path;
	std::ostream &fallback;

	void write(const std::string &text) const
	{
		if (!path) {
			fallback << text;
			return;
		}
		std::ofstream f(*path);
		if (!f)
			throw parameter_error("cannot open output file " + *path);
		f << text;
	}
};

void write_file(const std::filesystem::path &p, const std::string &text)
{
	std::ofstream f(p);
	if (!f)
		throw parameter_error("cannot open output file " + p.string());
	f << text;
}

std::string read_file(const std::string &p)
{
	std::ifstream f(p);
	if (!f)
		throw parameter_error("cannot read " + p);
	std::stringstream ss;
	ss << f.rdbuf();
	return ss.str();
}

// Roots until the density closes within mass_tol.
struct density_build {
	root_list roots;
	crystal_density density;
};

density_build density_for(const ensemble_spec &spec, double mass_tol, double root_tol)
{
	if (spec.family == Family::beta) {
		auto roots = find_roots(spec, *spec.M, root_tol);
		return {roots, build_density(spec, roots, mass_tol)};
	}
	for (int count = 32;; count *= 2) {
		auto roots = find_roots(spec, count, root_tol);
		try {
			return {roots, build_density(spec, roots, mass_tol)};
		} catch (const computation_error &) {
			if (count >= 1024)
				throw;
		}
	}
}

std::vector<bar> bars_from(const std::vector<double> &samples, double width)
{
	std::vector<bar> bars;
	const double n = static_cast<double>(samples.size());
	for (auto &b : histogram(samples, width))
		bars.push_back({b.left, b.left + b.width, static_cast<double>(b.count) / (n * b.width)});
	return bars;
}

struct cluster_summary {
	double predicted_right;
	double empirical_right;
	double empirical_left;
	std::size_t count;
};

// Each sample goes to the nearest density interval; report the extremes per interval.
std::vector<cluster_summary> clusters(const crystal_density &d, const std::vector<double> &sorted)
{
	std::vector<cluster_summary> out;
	for (auto &iv : d.intervals)
		out.push_back({iv.b, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0});
	for (double x : sorted) {
		std::size_t best = 0;
		double dist = std::numeric_limits<double>::infinity();
		for (std::size_t i = 0; i < d.intervals.size(); ++i) {
			const auto &iv = d.intervals[i];
			const double dd = x < iv.a ? iv.a - x : (x > iv.b ? x - iv.b : 0.0);
			if (dd < dist) {
				dist = dd;
				best = i;
			}
		}
		auto &c = out[best];
		c.empirical_right = std::max(c.empirical_right, x);
		c.empirical_left = std::min(c.empirical_left, x);
		++c.count;
	}
	return out;
}

json compare_report(const crystal_density &d, std::vector<double> samples)
{
	std::sort(samples.begin(), samples.end());
	json j;
	j["ks"] = ks_distance(d, samples);
	j["n_samples"] = samples.size();
	auto &cs = j["clusters"] = json::array();
	for (auto &c : clusters(d, samples)) {
		json e{{"predicted_right", c.predicted_right}, {"count", c.count}};
		if (c.count) {
			e["empirical_right"] = c.empirical_right;
			e["empirical_left"] = c.empirical_left;
			e["right_endpoint_offset"] = std::abs(c.empirical_right - c.predicted_right);
		}
		cs.push_back(e);
	}
	// gaps between consecutive occupied clusters, as seen in the samples
	auto &gaps = j["empirical_gaps"] = json::array();
	const auto cl = clusters(d, samples);
	for (std::size_t i = 1; i < cl.size(); ++i)
		if (cl[i].count && cl[i - 1].count)
			gaps.push_back(cl[i].empirical_left - cl[i - 1].empirical_right);
	return j;
}

std::vector<double> read_samples_csv(const std::string &path)
{
	std::ifstream f(path);
	if (!f)
		throw parameter_error("cannot read " + path);
	std::vector<double> xs;
	std::string line;
	while (std::getline(f, line)) {
		if (line.empty() || line[0] == '#' || line.rfind("chain", 0) == 0)
			continue;
		auto cols = split(line);
		if (cols.size() != 4)
			throw parameter_error("samples CSV rows need 4 columns");
		xs.push_back(std::stod(cols[3]));
	}
	return xs;
}

int run(CLI::App &app, const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace

int dispatch(int argc, char **argv)
{
	std::vector<std::string> args(argv + 1, argv + argc);
	return dispatch(args, std::cout, std::cerr);
}

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	CLI::App app{"htjack: high-temperature limits of discrete beta-ensembles"};
	return run(app, args, out, err);
}

namespace
{

void print_error(std::ostream &err, const std::string &kind, const std::string &message, const std::string &detail = "")
{
	json j{{"error", kind}, {"message", message}};
	if (!detail.empty())
		j["detail"] = json::parse(detail, nullptr, false);
	err << j.dump() << '\n';
}

int run(CLI::App &app, const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
	app.require_subcommand(1);
	std::optional<std::string> out_path;
	int status = 0;

	// moments
	auto *moments = app.add_subcommand("moments", "moments m_1..m_L from cumulants");
	family_flags mf;
	mf.attach(moments, false);
	std::optional<std::string> m_kappa;
	int m_order = 6;
	std::string m_method = "both";
	moments->add_option("--kappa", m_kappa, "explicit cumulants k1,k2,... (with --gamma)");
	moments->add_option("--order", m_order, "largest moment index L")->check(CLI::Range(1, 64));
	moments->add_option("--method", m_method, "paths | transform | both")
	    ->check(CLI::IsMember({"paths", "transform", "both"}));
	moments->add_option("--out", out_path);

	// cumulants
	auto *cumulants = app.add_subcommand("cumulants", "family cumulants kappa_n and the c_n sequence");
	family_flags cf;
	cf.attach(cumulants);
	int c_order = 6;
	cumulants->add_option("--order", c_order)->check(CLI::Range(1, 256));
	cumulants->add_option("--out", out_path);

	// check-equivalence
	auto *equiv = app.add_subcommand("check-equivalence", "path formula vs functional equation, exactly");
	family_flags ef;
	ef.attach(equiv, false);
	std::optional<std::string> e_kappa;
	int e_order = 10;
	equiv->add_option("--kappa", e_kappa);
	equiv->add_option("--order", e_order)->check(CLI::Range(1, default_max_path_length));
	equiv->add_option("--out", out_path);

	// qstar
	auto *qstar = app.add_subcommand("qstar", "row shifted Jack polynomial Q*_(k)(x; theta)");
	std::string q_x, q_theta;
	int q_k = 0;
	qstar->add_option("--x", q_x, "x1,x2,...")->required();
	qstar->add_option("--theta", q_theta)->required();
	qstar->add_option("--k", q_k)->required()->check(CLI::NonNegativeNumber);
	qstar->add_option("--out", out_path);

	// check-gamma-product
	auto *gprod = app.add_subcommand("check-gamma-product", "Q* generating series vs gamma product");
	std::string g_x, g_theta, g_z;
	int g_kmax = 40;
	double g_tol = 1e-8;
	gprod->add_option("--x", g_x)->required();
	gprod->add_option("--theta", g_theta)->required();
	gprod->add_option("--z", g_z)->required();
	gprod->add_option("--kmax", g_kmax)->check(CLI::NonNegativeNumber);
	gprod->add_option("--tol", g_tol);
	gprod->add_option("--out", out_path);

	// roots
	auto *roots = app.add_subcommand("roots", "largest real zeros of the characteristic function");
	family_flags rf;
	rf.attach(roots);
	int r_count = 50;
	double r_tol = default_root_tol;
	roots->add_option("--count", r_count)->check(CLI::PositiveNumber);
	roots->add_option("--tol", r_tol);
	roots->add_option("--out", out_path);

	// eigs
	auto *eigs = app.add_subcommand("eigs", "top eigenvalues of the truncated Jacobi operator");
	family_flags gf;
	gf.attach(eigs);
	std::optional<int> e_trunc;
	int e_count = 10;
	eigs->add_option("--trunc,--size", e_trunc, "truncation size (default: doubled until converged)");
	eigs->add_option("--count", e_count)->check(CLI::PositiveNumber);
	eigs->add_option("--out", out_path);

	// verify-spectrum
	auto *vspec = app.add_subcommand("verify-spectrum", "truncated spectra vs bisected zeros");
	family_flags vf;
	vf.attach(vspec);
	int v_count = 10;
	std::string v_trunc = "500,1000,2000,4000";
	double v_tol = default_root_tol;
	vspec->add_option("--count", v_count)->check(CLI::PositiveNumber);
	vspec->add_option("--trunc", v_trunc, "comma-separated truncation ladder");
	vspec->add_option("--tol", v_tol);
	vspec->add_option("--out", out_path);

	// density
	auto *dens = app.add_subcommand("density", "crystallized limit density");
	family_flags df;
	df.attach(dens);
	double d_mass_tol = default_mass_tol, d_tol = default_root_tol;
	std::string d_format = "json";
	int d_points = 2000;
	dens->add_option("--mass-tol", d_mass_tol);
	dens->add_option("--tol", d_tol);
	dens->add_option("--format", d_format)->check(CLI::IsMember({"json", "csv", "svg"}));
	dens->add_option("--points", d_points, "grid size for csv output");
	dens->add_option("--out", out_path);

	// sample
	auto *sample = app.add_subcommand("sample", "Metropolis sampling of a pure Jack measure");
	family_flags sf;
	sf.attach(sample);
	int s_N = 300, s_chains = 4;
	long s_sweeps = 1000000;
	std::optional<long> s_burn, s_thin;
	std::uint64_t s_seed = 42;
	std::optional<std::string> s_theta, s_diag;
	sample->add_option("--N", s_N)->check(CLI::PositiveNumber);
	sample->add_option("--theta", s_theta, "default gamma/N");
	sample->add_option("--sweeps", s_sweeps, "Metropolis steps per chain")->check(CLI::PositiveNumber);
	sample->add_option("--burn-in", s_burn);
	sample->add_option("--thin", s_thin);
	sample->add_option("--seed", s_seed);
	sample->add_option("--chains", s_chains)->check(CLI::PositiveNumber);
	sample->add_option("--diagnostics", s_diag, "write chain diagnostics JSON here");
	sample->add_option("--out", out_path);

	// compare
	auto *cmp = app.add_subcommand("compare", "KS distance between samples and a density");
	std::string c_density, c_samples;
	std::optional<std::string> c_svg;
	double c_bin = 0.05;
	cmp->add_option("--density", c_density)->required();
	cmp->add_option("--samples", c_samples)->required();
	cmp->add_option("--svg", c_svg);
	cmp->add_option("--bin-width", c_bin)->check(CLI::PositiveNumber);
	cmp->add_option("--out", out_path);

	// reproduce-figures
	auto *repro = app.add_subcommand("reproduce-figures", "N=300, gamma=2, eta in {1/2, 1}: sample, compare, plot");
	std::string rp_dir = "figures";
	long rp_sweeps = 1000000;
	std::uint64_t rp_seed = 42;
	int rp_chains = 4, rp_N = 300;
	repro->add_option("--out-dir", rp_dir);
	repro->add_option("--sweeps", rp_sweeps)->check(CLI::PositiveNumber);
	repro->add_option("--seed", rp_seed);
	repro->add_option("--chains", rp_chains)->check(CLI::PositiveNumber);
	repro->add_option("--N", rp_N)->check(CLI::PositiveNumber);

	std::vector<std::string> argv_store{"htjack"};
	argv_store.insert(argv_store.end(), args.begin(), args.end());
	std::vector<char *> argv;
	for (auto &a : argv_store)
		argv.push_back(a.data());

	try {
		app.parse(static_cast<int>(argv.size()), argv.data());
	} catch (const CLI::CallForHelp &) {
		out << app.help();
		return 0;
	} catch (const CLI::CallForAllHelp &) {
		out << app.help("", CLI::AppFormatMode::All);
		return 0;
	} catch (const CLI::ParseError &e) {
		print_error(err, "usage", e.what());
		return 1;
	}

	const output sink{out_path, out};
	auto config = [&](const std::string &cmd) {
		json j{{"command", cmd}, {"args", args}};
		return j.dump();
	};

	try {
		if (*moments) {
			cumulant_vector kv;
			if (m_kappa) {
				if (!mf.family.empty())
					throw parameter_error("give either --family or --kappa");
				if (!mf.gamma)
					throw parameter_error("--kappa needs --gamma");
				kv = {parse_rational(*mf.gamma), rational_list(*m_kappa)};
				if (kv.gamma <= 0)
					throw parameter_error("gamma must be positive");
				if (kv.kappa.size() < static_cast<std::size_t>(m_order))
					kv.kappa.resize(m_order);
			} else {
				if (mf.family.empty())
					throw parameter_error("moments needs --family or --kappa");
				kv = family_cumulants(mf.spec(), m_order);
			}
			std::optional<moment_vector> paths, transform;
			if (m_method != "transform")
				paths = moments_from_cumulants(kv, m_order);
			if (m_method != "paths")
				transform = c_to_m(kappa_to_c(kv, m_order), kv.gamma, m_order);
			std::ostringstream os;
			os << "# " << config("moments") << "\nell";
			if (paths)
				os << ",m_paths";
			if (transform)
				os << ",m_transform";
			os << '\n';
			for (int l = 1; l <= m_order; ++l) {
				os << l;
				if (paths)
					os << ',' << to_string(paths->m[l - 1]);
				if (transform)
					os << ',' << to_string(transform->m[l - 1]);
				os << '\n';
				if (paths && transform && paths->m[l - 1] != transform->m[l - 1])
					status = 2;
			}
			sink.write(os.str());
			if (status)
				print_error(err, "mismatch", "path and transform moments differ");
		} else if (*cumulants) {
			const auto spec = cf.spec();
			const auto kv = family_cumulants(spec, c_order);
			const auto cs = kappa_to_c(kv, c_order);
			std::ostringstream os;
			os << "# " << config("cumulants") << "\nn,kappa,c\n";
			for (int n = 1; n <= c_order; ++n)
				os << n << ',' << to_string(kv.kappa[n - 1]) << ',' << to_string(cs.c[n - 1]) << '\n';
			sink.write(os.str());
		} else if (*equiv) {
			cumulant_vector kv;
			if (e_kappa) {
				if (!ef.family.empty())
					throw parameter_error("give either --family or --kappa");
				if (!ef.gamma)
					throw parameter_error("--kappa needs --gamma");
				kv = {parse_rational(*ef.gamma), rational_list(*e_kappa)};
				if (kv.gamma <= 0)
					throw parameter_error("gamma must be positive");
				if (kv.kappa.size() < static_cast<std::size_t>(e_order))
					kv.kappa.resize(e_order);
			} else {
				if (ef.family.empty())
					throw parameter_error("check-equivalence needs --family or --kappa");
				kv = family_cumulants(ef.spec(), e_order);
			}
			const auto rep = equivalence_check(kv, e_order);
			auto j = json::parse(rep.to_json());
			j["config"] = json::parse(config("check-equivalence"));
			sink.write(j.dump(2) + "\n");
			if (!rep.all_equal()) {
				const auto &row = rep.results[*rep.first_mismatch - 1];
				print_error(err, "mismatch", "moments differ at ell = " + std::to_string(row.ell),
				            json{{"ell", row.ell}, {"paths", to_string(row.paths)}, {"transform", to_string(row.transform)}}
				                .dump());
				status = 2;
			}
		} else if (*qstar) {
			const auto v = qstar_row({rational_list(q_x), parse_rational(q_theta), q_k});
			json j{{"config", json::parse(config("qstar"))}, {"k", q_k}, {"value", to_string(v)},
			       {"approx", to_double(v)}};
			sink.write(j.dump(2) + "\n");
		} else if (*gprod) {
			const auto rep =
			    gamma_product_check(rational_list(g_x), parse_rational(g_theta), parse_rational(g_z), g_kmax, g_tol);
			auto j = json::parse(rep.to_json());
			j["config"] = json::parse(config("check-gamma-product"));
			sink.write(j.dump(2) + "\n");
			if (!rep.pass) {
				print_error(err, "tolerance", "partial sum and gamma product disagree beyond tol");
				status = 2;
			}
		} else if (*roots) {
			const auto rl = find_roots(rf.spec(), r_count, r_tol);
			std::ostringstream os;
			json cfg = json::parse(config("roots"));
			cfg["asymptotics_conjectural"] = rl.asymptotics_conjectural;
			os << "# " << cfg.dump() << "\nk,root\n";
			for (std::size_t k = 0; k < rl.roots.size(); ++k)
				os << k + 1 << ',' << fmt_double(rl.roots[k]) << '\n';
			sink.write(os.str());
		} else if (*eigs) {
			const jacobi_operator op(gf.spec());
			const int size = op.finite_size() ? *op.finite_size()
			                                  : (e_trunc ? *e_trunc : converged_truncation(op, e_count, 1e-12));
			const auto ev = truncated_eigs(op, size, e_count, 0);
			std::ostringstream os;
			json cfg = json::parse(config("eigs"));
			cfg["size"] = size;
			os << "# " << cfg.dump() << "\nk,eigenvalue\n";
			for (std::size_t k = 0; k < ev.size(); ++k)
				os << k + 1 << ',' << fmt_double(ev[k]) << '\n';
			sink.write(os.str());
		} else if (*vspec) {
			std::vector<int> sizes;
			for (auto &s : split(v_trunc))
				sizes.push_back(std::stoi(s));
			const auto rep = spectrum_root_agreement(vf.spec(), v_count, sizes, v_tol);
			auto j = json::parse(rep.to_json());
			j["config"] = json::parse(config("verify-spectrum"));
			sink.write(j.dump(2) + "\n");
		} else if (*dens) {
			const auto spec = df.spec();
			const auto built = density_for(spec, d_mass_tol, d_tol);
			json cfg = json::parse(config("density"));
			cfg["roots_used"] = built.roots.roots.size();
			cfg["asymptotics_conjectural"] = built.roots.asymptotics_conjectural;
			if (d_format == "json")
				sink.write(density_to_json(built.density, cfg.dump()) + "\n");
			else if (d_format == "csv")
				sink.write(density_to_csv(built.density, d_points, cfg.dump()));
			else
				sink.write(overlay_svg(built.density, {}, "limit density, " + family_name(spec.family), cfg.dump()));
		} else if (*sample) {
			const auto spec = sf.spec();
			auto cc = chain_config::defaults(spec, s_N, s_sweeps, s_seed, s_chains);
			if (s_theta)
				cc.theta = parse_rational(*s_theta);
			if (s_burn)
				cc.burn_in = *s_burn;
			if (s_thin)
				cc.thin = *s_thin;
			cc.validate();
			const auto res = mcmc_run(cc);
			sink.write(res.samples_csv());
			if (s_diag)
				write_file(*s_diag, res.diagnostics_json() + "\n");
		} else if (*cmp) {
			const auto d = density_from_json(read_file(c_density));
			auto xs = read_samples_csv(c_samples);
			if (xs.empty())
				throw parameter_error("no samples in " + c_samples);
			auto j = compare_report(d, xs);
			j["config"] = json::parse(config("compare"));
			sink.write(j.dump(2) + "\n");
			if (c_svg)
				write_file(*c_svg, overlay_svg(d, bars_from(xs, c_bin), "samples vs limit density", config("compare")));
		} else if (*repro) {
			std::filesystem::create_directories(rp_dir);
			for (const char *eta : {"1/2", "1"}) {
				const auto spec = ensemble_spec::planch(2, parse_rational(eta));
				const auto cc = chain_config::defaults(spec, rp_N, rp_sweeps, rp_seed, rp_chains);
				const auto res = mcmc_run(cc);
				const auto built = density_for(spec, default_mass_tol, default_root_tol);
				auto xs = res.positions();
				auto j = compare_report(built.density, xs);
				j["config"] = json::parse(cc.to_json());
				j["diagnostics"] = json::parse(res.diagnostics_json())["chains"];
				for (auto &c : j["diagnostics"])
					c.erase("log_weight_trace");
				const std::string tag = std::string("planch_gamma2_eta") + (eta[1] ? "1_2" : "1");
				write_file(std::filesystem::path(rp_dir) / (tag + ".json"), j.dump(2) + "\n");
				write_file(std::filesystem::path(rp_dir) / (tag + ".svg"),
				           overlay_svg(built.density, bars_from(xs, 0.05),
				                       std::string("N=") + std::to_string(rp_N) + ", theta=2/N, eta=" + eta,
				                       cc.to_json()));
				out << tag << ": ks = " << j["ks"].get<double>() << ", samples = " << xs.size() << '\n';
			}
		}
	} catch (const parameter_error &e) {
		print_error(err, "parameter", e.what());
		return 1;
	} catch (const precondition_error &e) {
		print_error(err, "precondition", e.what());
		return 1;
	} catch (const resource_error &e) {
		print_error(err, "resource", e.what());
		return 2;
	} catch (const computation_error &e) {
		print_error(err, "computation", e.what(), e.detail());
		return 2;
	} catch (const json::exception &e) {
		print_error(err, "input", e.what());
		return 1;
	} catch (const std::invalid_argument &e) {
		print_error(err, "input", e.what());
		return 1;
	}
	return status;
}

} // namespace

} // namespace htjack::cli
