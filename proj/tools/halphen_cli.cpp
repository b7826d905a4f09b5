#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "halphen_lab/halphen_lab.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(hl_status st)
{
    if (st != HL_OK)
        throw NumericError(hl_last_error());
}

std::complex<double> parse_complex(const std::string& text)
{
    static const std::string num = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex full("^(" + num + ")([+-](?:\\d+\\.?\\d*|\\.\\d+)(?:[eE][+-]?\\d+)?)?i$");
    static const std::regex imag_only("^(" + num + ")?i$");
    static const std::regex real_only("^(" + num + ")$");
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    std::smatch m;
    if (std::regex_match(s, m, real_only))
        return {std::stod(m[1]), 0.0};
    if (std::regex_match(s, m, full) && m[2].matched)
        return {std::stod(m[1]), std::stod(m[2])};
    if (std::regex_match(s, m, imag_only)) {
        std::string c = m[1].matched ? m[1].str() : "1";
        if (c == "+" || c == "-")
            c += "1";
        return {0.0, std::stod(c)};
    }
    throw UsageError("cannot parse complex number '" + text + "' (expected a+bi)");
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size())
            throw UsageError(std::string(what) + ": '" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.size() != expected)
        throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " comma-separated values");
    return out;
}

json cjson(const double v[2]) { return json::array({v[0], v[1]}); }

json value_json(double value, double err)
{
    json j;
    j["value"] = value;
    j["est_error"] = err;
    return j;
}

std::string take_string(char* s)
{
    std::string out(s);
    hl_string_free(s);
    return out;
}

struct Output {
    std::string path;

    void write(const std::string& text) const
    {
        if (path.empty() || path == "-") {
            std::cout << text;
            if (!text.empty() && text.back() != '\n')
                std::cout << '\n';
            return;
        }
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw NumericError("IoError: cannot open " + path);
        os << text;
        if (!text.empty() && text.back() != '\n')
            os << '\n';
    }
    void write(const json& j) const { write(j.dump(2)); }
};

struct Trajectory {
    hl_trajectory* p = nullptr;
    ~Trajectory() { hl_trajectory_free(p); }
};

struct Flow {
    hl_flow* p = nullptr;
    ~Flow() { hl_flow_free(p); }
};

hl_system parse_system(const std::string& s)
{
    if (s == "dh")
        return HL_SYSTEM_DARBOUX_HALPHEN;
    if (s == "lagrange")
        return HL_SYSTEM_LAGRANGE;
    throw UsageError("unknown system '" + s + "'");
}

std::string read_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw NumericError("IoError: cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Darboux-Halphen systems, gravitational instantons and modular forms"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", hl_version());

    Output out;
    int threads = 0;
    std::uint64_t seed = 1;
    app.add_option("--out", out.path, "Write output to this path instead of stdout");
    app.add_option("--threads", threads, "Worker thread cap (default: HALPHEN_LAB_THREADS or hardware)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Seed for randomized sweeps");

    // solve
    auto* solve = app.add_subcommand("solve", "Integrate or sample a trajectory");
    std::string system = "dh", init, format = "csv";
    double t0 = 1.0, t1 = 10.0, tol = 1e-10;
    bool halphen = false, no_stop = false;
    std::size_t samples = 200;
    solve->add_option("--system", system, "dh or lagrange")->check(CLI::IsMember({"dh", "lagrange"}));
    solve->add_option("--init", init, "Initial Omega as a,b,c");
    solve->add_option("--t0", t0, "Initial T");
    solve->add_option("--t1", t1, "Final T");
    solve->add_option("--tol", tol, "Integrator tolerance")->check(CLI::PositiveNumber);
    solve->add_flag("--halphen", halphen, "Sample the closed-form Halphen solution");
    solve->add_option("--samples", samples, "Samples for --halphen")->check(CLI::Range(2, 1000000));
    solve->add_flag("--through-roots", no_stop, "Continue through zero crossings");
    solve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // curvature
    auto* curv = app.add_subcommand("curvature", "Curvature report and endpoint classes of a trajectory");
    std::string input, builtin;
    curv->add_option("--input", input, "Trajectory CSV file")->check(CLI::ExistingFile);
    curv->add_option("--builtin", builtin, "halphen")->check(CLI::IsMember({"halphen"}));
    curv->add_option("--system", system, "System of the input trajectory")->check(CLI::IsMember({"dh", "lagrange"}));
    curv->add_option("--t0", t0, "Builtin start T");
    curv->add_option("--t1", t1, "Builtin end T");
    curv->add_option("--samples", samples, "Builtin samples")->check(CLI::Range(2, 1000000));

    // flow
    auto* flow = app.add_subcommand("flow", "Ricci flow on Bianchi IX spheres");
    std::size_t batch = 0;
    double lo = 0.1, hi = 10.0;
    flow->add_option("--init", init, "Initial Omega as a,b,c (all positive)");
    flow->add_option("--t0", t0, "Initial T");
    flow->add_option("--t1", t1, "Final T");
    flow->add_option("--tol", tol, "Integrator tolerance")->check(CLI::PositiveNumber);
    flow->add_option("--batch", batch, "Number of random initial conditions");
    flow->add_option("--lo", lo, "Lower bound of the random initial range");
    flow->add_option("--hi", hi, "Upper bound of the random initial range");
    flow->add_option("--format", format, "json summary or csv series")->check(CLI::IsMember({"csv", "json"}));

    // eisenstein
    auto* eis = app.add_subcommand("eisenstein", "Non-holomorphic Eisenstein series E_s");
    double s = 2.0, cutoff = 120.0, h = 0.0;
    std::string tau = "0+1i", method = "fourier";
    bool both = false;
    eis->add_option("--s", s, "Weight s")->required();
    eis->add_option("--tau", tau, "Point of the upper half-plane, a+bi");
    eis->add_option("--cutoff", cutoff, "Lattice cutoff");
    eis->add_option("--method", method, "lattice or fourier")->check(CLI::IsMember({"lattice", "fourier"}));
    eis->add_flag("--both-methods", both, "Report lattice and Fourier values side by side");
    eis->add_option("--eigencheck", h, "Also report the Laplacian residual with this step");

    // dsum
    auto* dsum = app.add_subcommand("dsum", "Kronecker-Eisenstein sum D_n");
    int n = 2;
    dsum->add_option("--n", n, "Number of propagators")->required();
    dsum->add_option("--tau", tau, "Point of the upper half-plane, a+bi");
    dsum->add_option("--cutoff", cutoff, "Momentum cutoff |p| <= R");

    // graphd
    auto* graphd = app.add_subcommand("graphd", "Modular graph sum on four vertices");
    std::string mult;
    graphd->add_option("--mult", mult, "n12,n13,n14,n23,n24,n34")->required();
    graphd->add_option("--tau", tau, "Point of the upper half-plane, a+bi");
    graphd->add_option("--cutoff", cutoff, "Momentum cutoff |p| <= R");

    // amplitude
    auto* amp = app.add_subcommand("amplitude", "Genus-zero four-point amplitude");
    double aps = 0.1, apt = 0.15, alpha = 1.0;
    int terms = 14;
    std::string form = "both";
    amp->add_option("--aps", aps, "alpha' s")->required();
    amp->add_option("--apt", apt, "alpha' t")->required();
    amp->add_option("--alpha-prime", alpha, "alpha'")->check(CLI::PositiveNumber);
    amp->add_option("--form", form, "gamma, series or both")->check(CLI::IsMember({"gamma", "series", "both"}));
    amp->add_option("--terms", terms, "Terms of the zeta series")->check(CLI::NonNegativeNumber);

    // theta
    auto* th = app.add_subcommand("theta", "Jacobi theta functions and eta");
    int j = 3;
    std::string characteristic, v = "0";
    th->add_option("--j", j, "Classical theta index 1..4")->check(CLI::Range(1, 4));
    th->add_option("--char", characteristic, "Characteristic a,b (real)");
    th->add_option("--v", v, "Argument v, a+bi");
    th->add_option("--tau", tau, "Point of the upper half-plane, a+bi");

    // conformal
    auto* conf = app.add_subcommand("conformal", "Conformally self-dual sector");
    std::string ca = "0.3", cb = "0.7", z = "0+1.1i", z0;
    std::string cp;
    double rho = 1.0, eta = 0.7, param = 1.0;
    conf->add_option("--a", ca, "Characteristic a, a+bi");
    conf->add_option("--b", cb, "Characteristic b, a+bi");
    conf->add_option("--z", z, "Point z, a+bi");
    conf->add_option("--z0", z0, "Use the Atiyah-Hitchin limit with modulus z0");
    conf->add_option("--cp", cp, "Harmonic F check: cp2, heisenberg or eisenstein")
        ->check(CLI::IsMember({"cp2", "heisenberg", "eisenstein"}));
    conf->add_option("--rho", rho, "rho for --cp");
    conf->add_option("--eta", eta, "eta for --cp");
    conf->add_option("--param", param, "rho0 (heisenberg) or s (eisenstein)");
    conf->add_option("--step", h, "Finite-difference step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        hl_set_threads(threads);

        if (*solve) {
            Trajectory t;
            if (halphen) {
                if (system != "dh")
                    throw UsageError("--halphen needs --system dh");
                if (!init.empty())
                    throw UsageError("--halphen and --init are exclusive");
                check(hl_trajectory_halphen(t0, t1, samples, &t.p));
            } else {
                if (init.empty())
                    throw UsageError("solve needs --init or --halphen");
                auto w = parse_list(init, 3, "--init");
                check(hl_trajectory_integrate(parse_system(system), w.data(), t0, t1, tol, no_stop ? 0 : 1, &t.p));
            }
            char* text = nullptr;
            check(format == "csv" ? hl_trajectory_csv(t.p, &text) : hl_trajectory_json(t.p, &text));
            out.write(take_string(text));
            return 0;
        }

        if (*curv) {
            Trajectory t;
            if (input.empty() == builtin.empty())
                throw UsageError("curvature needs exactly one of --input or --builtin");
            if (!input.empty())
                check(hl_trajectory_from_csv(read_file(input).c_str(), parse_system(system), &t.p));
            else
                check(hl_trajectory_halphen(t0, t1, samples, &t.p));
            char* text = nullptr;
            check(hl_curvature_report(t.p, &text));
            out.write(take_string(text));
            return 0;
        }

        if (*flow) {
            char* text = nullptr;
            if (batch > 0) {
                if (!init.empty())
                    throw UsageError("--batch and --init are exclusive");
                check(hl_flow_batch_json(batch, lo, hi, t0, t1, tol, seed, &text));
            } else {
                if (init.empty())
                    throw UsageError("flow needs --init or --batch");
                auto w = parse_list(init, 3, "--init");
                Flow f;
                check(hl_flow_run(w.data(), t0, t1, tol, &f.p));
                check(format == "csv" ? hl_flow_csv(f.p, &text) : hl_flow_summary_json(f.p, &text));
            }
            out.write(take_string(text));
            return 0;
        }

        if (*eis) {
            auto t = parse_complex(tau);
            json r;
            r["s"] = s;
            r["tau"] = {t.real(), t.imag()};
            double val = 0, err = 0;
            if (both || method == "lattice") {
                check(hl_eisenstein_lattice(s, t.real(), t.imag(), cutoff, &val, &err));
                r["lattice"] = value_json(val, err);
                r["cutoff"] = cutoff;
            }
            if (both || method == "fourier") {
                double fv = 0, fe = 0;
                check(hl_eisenstein_fourier(s, t.real(), t.imag(), 0, &fv, &fe));
                r["fourier"] = value_json(fv, fe);
                if (both)
                    r["agree"] = std::abs(fv - val) <= err + fe;
            }
            if (h > 0) {
                double res = 0;
                check(hl_laplacian_eigencheck(s, t.real(), t.imag(), h, &res));
                r["laplacian_residual"] = res;
            }
            out.write(r);
            return 0;
        }

        if (*dsum) {
            auto t = parse_complex(tau);
            double val = 0, err = 0;
            check(hl_kronecker_eisenstein_dn(n, t.real(), t.imag(), cutoff, &val, &err));
            json r;
            r["n"] = n;
            r["tau"] = {t.real(), t.imag()};
            r["cutoff"] = cutoff;
            r["value"] = val;
            r["est_error"] = err;
            r["convention"] = "prod tau2/(4 pi |p|^2), p != 0, |p| <= cutoff";
            if (n == 2 || n == 3) {
                double e = 0;
                check(hl_eisenstein_fourier(double(n), t.real(), t.imag(), 0, &e, nullptr));
                double ref = e / std::pow(4.0 * std::numbers::pi, n);
                if (n == 3)
                    ref += 1.2020569031595942 / 64.0;
                r["eisenstein_identity"] = ref;
            }
            out.write(r);
            return 0;
        }

        if (*graphd) {
            auto t = parse_complex(tau);
            auto m = parse_list(mult, 6, "--mult");
            int mi[6];
            for (int k = 0; k < 6; ++k) {
                if (m[std::size_t(k)] < 0 || m[std::size_t(k)] != std::floor(m[std::size_t(k)]))
                    throw UsageError("--mult entries must be non-negative integers");
                mi[k] = int(m[std::size_t(k)]);
            }
            double val = 0, err = 0;
            int forced = 0, loops = 0;
            check(hl_graph_d(mi, t.real(), t.imag(), cutoff, &val, &err, &forced, &loops));
            json r;
            r["mult"] = std::vector<int>(mi, mi + 6);
            r["tau"] = {t.real(), t.imag()};
            r["cutoff"] = cutoff;
            r["value"] = val;
            r["est_error"] = err;
            r["loops"] = loops;
            r["forced_zero"] = forced != 0;
            out.write(r);
            return 0;
        }

        if (*amp) {
            const double S = aps / alpha, T = apt / alpha;
            json r;
            r["alpha_prime"] = alpha;
            r["aps"] = aps;
            r["apt"] = apt;
            r["apu"] = -aps - apt;
            double g = 0, ser = 0;
            if (form != "series") {
                check(hl_tree_amplitude_gamma(S, T, alpha, &g));
                r["gamma"] = g;
            }
            if (form != "gamma") {
                check(hl_tree_amplitude_series(S, T, alpha, terms, &ser));
                r["series"] = ser;
                r["terms"] = terms;
            }
            if (form == "both")
                r["relative_difference"] = std::abs(g - ser) / std::abs(g);
            out.write(r);
            return 0;
        }

        if (*th) {
            auto t = parse_complex(tau);
            auto vv = parse_complex(v);
            double val[2], e[2];
            json r;
            r["tau"] = {t.real(), t.imag()};
            r["v"] = {vv.real(), vv.imag()};
            if (!characteristic.empty()) {
                auto c = parse_list(characteristic, 2, "--char");
                double a[2] = {c[0], 0.0}, b[2] = {c[1], 0.0};
                check(hl_theta_char(a, b, vv.real(), vv.imag(), t.real(), t.imag(), val));
                r["char"] = c;
            } else {
                check(hl_theta(j, vv.real(), vv.imag(), t.real(), t.imag(), val));
                r["j"] = j;
            }
            r["value"] = cjson(val);
            check(hl_dedekind_eta(t.real(), t.imag(), e));
            r["eta"] = cjson(e);
            out.write(r);
            return 0;
        }

        if (*conf) {
            json r;
            if (!cp.empty()) {
                hl_cp_field f = cp == "cp2" ? HL_CP_FIELD_CP2 : cp == "heisenberg" ? HL_CP_FIELD_HEISENBERG
                                                                                   : HL_CP_FIELD_EISENSTEIN;
                if (f == HL_CP_FIELD_EISENSTEIN && !conf->count("--param"))
                    param = 1.5;
                double res = 0;
                check(hl_cp_harmonic_check(f, param, rho, eta, h > 0 ? h : 1e-3, &res));
                r["field"] = cp;
                r["rho"] = rho;
                r["eta"] = eta;
                r["residual"] = res;
                out.write(r);
                return 0;
            }
            auto zz = parse_complex(z);
            double w[6], lam[2];
            if (!z0.empty()) {
                auto zc = parse_complex(z0);
                check(hl_w_ah_limit(zc.real(), zc.imag(), zz.real(), zz.imag(), w, lam));
                r["z0"] = {zc.real(), zc.imag()};
            } else {
                auto a = parse_complex(ca), b = parse_complex(cb);
                double ad[2] = {a.real(), a.imag()}, bd[2] = {b.real(), b.imag()};
                check(hl_w_theta(ad, bd, zz.real(), zz.imag(), w, lam));
                double res = 0;
                check(hl_w_ode_residual(ad, bd, zz.real(), zz.imag(), h > 0 ? h : 1e-3, &res));
                r["a"] = cjson(ad);
                r["b"] = cjson(bd);
                r["ode_residual"] = res;
            }
            std::complex<double> w1{w[0], w[1]}, w2{w[2], w[3]}, w3{w[4], w[5]};
            auto fi = w1 * w1 - w2 * w2 + w3 * w3;
            r["z"] = {zz.real(), zz.imag()};
            r["w"] = {cjson(w), cjson(w + 2), cjson(w + 4)};
            r["lambda"] = cjson(lam);
            r["first_integral"] = {fi.real(), fi.imag()};
            out.write(r);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}
