#include "halphen_lab/halphen_lab.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"

#include "halphen_lab/amplitudes.hpp"
#include "halphen_lab/conformal.hpp"
#include "halphen_lab/flows.hpp"
#include "halphen_lab/io.hpp"
#include "halphen_lab/maass.hpp"
#include "halphen_lab/modforms.hpp"
#include "halphen_lab/parallel.hpp"

struct hl_trajectory {
    hl::Trajectory traj;
};

struct hl_flow {
    hl::FlowRun run;
};

namespace {

thread_local std::string g_last_error;

template <class F>
hl_status guarded(F&& f)
{
    try {
        f();
        g_last_error.clear();
        return HL_OK;
    } catch (const hl::Error& e) {
        g_last_error = e.what();
        return static_cast<hl_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return HL_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HL_INTERNAL;
    }
}

void need(const void* p, const char* what)
{
    if (p == nullptr)
        hl::fail(hl::ErrorCode::InvalidArgument, std::string("null pointer: ") + what);
}

char* copy_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put(hl::cplx c, double out[2])
{
    out[0] = c.real();
    out[1] = c.imag();
}

void put_w(const hl::WVars& w, double out[6], double lambda[2])
{
    for (int i = 0; i < 3; ++i)
        put(w.w[std::size_t(i)], out + 2 * i);
    if (lambda != nullptr)
        put(w.lambda, lambda);
}

hl::System to_system(hl_system s)
{
    switch (s) {
    case HL_SYSTEM_DARBOUX_HALPHEN:
        return hl::System::DarbouxHalphen;
    case HL_SYSTEM_LAGRANGE:
        return hl::System::Lagrange;
    }
    hl::fail(hl::ErrorCode::InvalidArgument, "unknown system");
}

hl::ModularPoint point(double re, double im) { return hl::ModularPoint(hl::cplx{re, im}); }

hl::LatticeSumSpec lattice_spec(double cutoff)
{
    hl::LatticeSumSpec spec;
    spec.cutoff = cutoff;
    spec.validate();
    return spec;
}

} // namespace

extern "C" {

const char* hl_version(void) { return "0.1.0"; }

const char* hl_status_name(hl_status status) { return hl::error_name(static_cast<hl::ErrorCode>(status)); }

const char* hl_last_error(void) { return g_last_error.c_str(); }

void hl_set_threads(int n) { hl::set_thread_count(n); }

int hl_get_threads(void) { return hl::thread_count(); }

void hl_string_free(char* s) { std::free(s); }

hl_status hl_theta(int j, double v_re, double v_im, double tau_re, double tau_im, double out[2])
{
    return guarded([&] {
        need(out, "out");
        put(hl::theta(j, {v_re, v_im}, point(tau_re, tau_im)), out);
    });
}

hl_status hl_theta_char(const double a[2], const double b[2], double v_re, double v_im, double tau_re, double tau_im,
                        double out[2])
{
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        hl::ThetaChar ch{{a[0], a[1]}, {b[0], b[1]}};
        put(hl::theta_char(ch, {v_re, v_im}, point(tau_re, tau_im)), out);
    });
}

hl_status hl_dedekind_eta(double tau_re, double tau_im, double out[2])
{
    return guarded([&] {
        need(out, "out");
        put(hl::dedekind_eta(point(tau_re, tau_im)), out);
    });
}

hl_status hl_eisenstein_holo(int k, double tau_re, double tau_im, double out[2])
{
    return guarded([&] {
        need(out, "out");
        put(hl::eisenstein_holo(k, point(tau_re, tau_im)), out);
    });
}

hl_status hl_eisenstein_lattice(double s, double tau_re, double tau_im, double cutoff, double* value, double* est_error)
{
    return guarded([&] {
        need(value, "value");
        auto v = hl::eisenstein_lattice(s, point(tau_re, tau_im), lattice_spec(cutoff));
        *value = v.value;
        if (est_error)
            *est_error = v.est_error;
    });
}

hl_status hl_eisenstein_fourier(double s, double tau_re, double tau_im, int n_max, double* value, double* est_error)
{
    return guarded([&] {
        need(value, "value");
        auto tau = point(tau_re, tau_im);
        auto v = hl::eisenstein_fourier(s, tau, n_max > 0 ? n_max : hl::fourier_modes_for(s, tau));
        *value = v.value;
        if (est_error)
            *est_error = v.est_error;
    });
}

hl_status hl_laplacian_eigencheck(double s, double tau_re, double tau_im, double h, double* residual)
{
    return guarded([&] {
        need(residual, "residual");
        *residual = hl::laplacian_eigencheck(s, point(tau_re, tau_im), h);
    });
}

hl_status hl_trajectory_integrate(hl_system system, const double init[3], double T0, double T_end, double tol,
                                  int stop_on_root, hl_trajectory** out)
{
    return guarded([&] {
        need(init, "init");
        need(out, "out");
        *out = nullptr;
        auto t = std::make_unique<hl_trajectory>();
        t->traj = hl::integrate(to_system(system), {{init[0], init[1], init[2]}, T0}, T_end, tol, stop_on_root != 0);
        *out = t.release();
    });
}

hl_status hl_trajectory_halphen(double T0, double T1, size_t n, hl_trajectory** out)
{
    return guarded([&] {
        need(out, "out");
        *out = nullptr;
        auto t = std::make_unique<hl_trajectory>();
        t->traj = hl::sample_halphen(T0, T1, n);
        *out = t.release();
    });
}

hl_status hl_trajectory_from_csv(const char* text, hl_system system, hl_trajectory** out)
{
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = nullptr;
        std::istringstream is{std::string(text)};
        auto t = std::make_unique<hl_trajectory>();
        t->traj = hl::read_trajectory_csv(is, to_system(system));
        *out = t.release();
    });
}

size_t hl_trajectory_length(const hl_trajectory* traj) { return traj ? traj->traj.samples.size() : 0; }

hl_status hl_trajectory_sample(const hl_trajectory* traj, size_t i, double* T, double Omega[3], double Omega_dot[3],
                               double* tau)
{
    return guarded([&] {
        need(traj, "traj");
        if (i >= traj->traj.samples.size())
            hl::fail(hl::ErrorCode::OutOfRange, "sample index out of range");
        const auto& s = traj->traj.samples[i];
        if (T)
            *T = s.T;
        for (int c = 0; c < 3; ++c) {
            if (Omega)
                Omega[c] = s.Omega[std::size_t(c)];
            if (Omega_dot)
                Omega_dot[c] = s.Omega_dot[std::size_t(c)];
        }
        if (tau)
            *tau = s.tau;
    });
}

hl_status hl_trajectory_csv(const hl_trajectory* traj, char** out)
{
    return guarded([&] {
        need(traj, "traj");
        need(out, "out");
        std::ostringstream os;
        hl::write_trajectory_csv(os, traj->traj);
        *out = copy_string(os.str());
    });
}

hl_status hl_trajectory_json(const hl_trajectory* traj, char** out)
{
    return guarded([&] {
        need(traj, "traj");
        need(out, "out");
        *out = copy_string(hl::trajectory_json(traj->traj));
    });
}

hl_status hl_curvature_report(const hl_trajectory* traj, char** out)
{
    return guarded([&] {
        need(traj, "traj");
        need(out, "out");
        *out = copy_string(hl::curvature_report_json(traj->traj));
    });
}

void hl_trajectory_free(hl_trajectory* traj) { delete traj; }

hl_status hl_halphen_real(double T, double Omega[3])
{
    return guarded([&] {
        need(Omega, "Omega");
        auto st = hl::halphen_closed_form_real(T);
        for (int c = 0; c < 3; ++c)
            Omega[c] = st.Omega[std::size_t(c)];
    });
}

hl_status hl_halphen_dh_residual(double T, double* residual)
{
    return guarded([&] {
        need(residual, "residual");
        *residual = hl::halphen_real_residual(T);
    });
}

hl_status hl_reflection_check(double T, double residual[3])
{
    return guarded([&] {
        need(residual, "residual");
        auto r = hl::reflection_check(T);
        for (int c = 0; c < 3; ++c)
            residual[c] = r[std::size_t(c)];
    });
}

hl_status hl_flow_run(const double init[3], double T0, double T_end, double tol, hl_flow** out)
{
    return guarded([&] {
        need(init, "init");
        need(out, "out");
        *out = nullptr;
        auto f = std::make_unique<hl_flow>();
        f->run = hl::flow_run({{init[0], init[1], init[2]}, T0}, T_end, tol);
        *out = f.release();
    });
}

hl_status hl_flow_isotropy(const hl_flow* run, double T, double* ratio)
{
    return guarded([&] {
        need(run, "run");
        need(ratio, "ratio");
        *ratio = hl::isotropy_ratio(run->run, T);
    });
}

hl_status hl_flow_volume_rate(const hl_flow* run, double T, double* numeric, double* formula, double* residual)
{
    return guarded([&] {
        need(run, "run");
        auto v = hl::volume_rate_check(run->run, T);
        if (numeric)
            *numeric = v.numeric;
        if (formula)
            *formula = v.formula;
        if (residual)
            *residual = v.residual;
    });
}

hl_status hl_flow_summary_json(const hl_flow* run, char** out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        *out = copy_string(hl::flow_summary_json(run->run));
    });
}

hl_status hl_flow_csv(const hl_flow* run, char** out)
{
    return guarded([&] {
        need(run, "run");
        need(out, "out");
        std::ostringstream os;
        hl::write_flow_csv(os, run->run);
        *out = copy_string(os.str());
    });
}

void hl_flow_free(hl_flow* run) { delete run; }

hl_status hl_flow_batch_json(size_t count, double lo, double hi, double T0, double T_end, double tol, uint64_t seed,
                             char** out)
{
    return guarded([&] {
        need(out, "out");
        hl::require(count >= 1, hl::ErrorCode::InvalidArgument, "batch needs at least one run");
        hl::require(lo > 0.0 && hi > lo, hl::ErrorCode::InvalidArgument, "batch range needs 0 < lo < hi");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(lo, hi);
        std::vector<hl::Vec3> inits(count);
        for (auto& v : inits)
            v = {U(rng), U(rng), U(rng)};
        std::vector<hl::FlowRun> runs(count);
        hl::parallel_for(count, [&](std::size_t i) { runs[i] = hl::flow_run({inits[i], T0}, T_end, tol); });

        nlohmann::ordered_json j;
        j["count"] = count;
        j["range"] = {lo, hi};
        j["T0"] = T0;
        j["T_end"] = T_end;
        j["seed"] = seed;
        bool all = true;
        double worst_dev = 0.0, worst_iso = 0.0;
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < count; ++i) {
            const auto& last = runs[i].traj.samples.back();
            double dev = 0.0;
            for (double w : last.Omega)
                dev = std::max(dev, std::abs(last.T * w - 1.0));
            double iso = hl::isotropy_ratio(runs[i], last.T);
            all = all && runs[i].stayed_positive;
            worst_dev = std::max(worst_dev, dev);
            worst_iso = std::max(worst_iso, iso);
            list.push_back({{"initial", {inits[i][0], inits[i][1], inits[i][2]}},
                            {"trapped", runs[i].stayed_positive},
                            {"asymptote_deviation", dev},
                            {"isotropy_at_end", iso}});
        }
        j["all_trapped"] = all;
        j["max_asymptote_deviation"] = worst_dev;
        j["max_isotropy_at_end"] = worst_iso;
        j["runs"] = std::move(list);
        *out = copy_string(j.dump(2));
    });
}

hl_status hl_w_theta(const double a[2], const double b[2], double z_re, double z_im, double w[6], double lambda[2])
{
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(w, "w");
        put_w(hl::w_theta_solution({a[0], a[1]}, {b[0], b[1]}, {z_re, z_im}), w, lambda);
    });
}

hl_status hl_w_ah_limit(double z0_re, double z0_im, double z_re, double z_im, double w[6], double lambda[2])
{
    return guarded([&] {
        need(w, "w");
        put_w(hl::ah_limit_solution({z0_re, z0_im}, {z_re, z_im}), w, lambda);
    });
}

hl_status hl_w_ode_residual(const double a[2], const double b[2], double z_re, double z_im, double h, double* residual)
{
    return guarded([&] {
        need(a, "a");
        need(b, "b");
        need(residual, "residual");
        hl::cplx ca{a[0], a[1]}, cb{b[0], b[1]};
        *residual = hl::w_ode_residual([=](hl::cplx z) { return hl::w_theta_solution(ca, cb, z).w; }, {z_re, z_im}, h);
    });
}

hl_status hl_cp_harmonic_check(hl_cp_field field, double param, double rho, double eta, double h, double* residual)
{
    return guarded([&] {
        need(residual, "residual");
        hl::CPField F;
        switch (field) {
        case HL_CP_FIELD_CP2:
            F = hl::cp_field_cp2();
            break;
        case HL_CP_FIELD_HEISENBERG:
            F = hl::cp_field_heisenberg(param);
            break;
        case HL_CP_FIELD_EISENSTEIN:
            F = hl::cp_field_eisenstein(param);
            break;
        default:
            hl::fail(hl::ErrorCode::InvalidArgument, "unknown CP field");
        }
        *residual = hl::cp_harmonic_check(F, rho, eta, h);
    });
}

hl_status hl_tree_amplitude_gamma(double s, double t, double alpha_prime, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = hl::tree_amplitude_gamma(hl::Mandelstam::from_st(s, t, alpha_prime));
    });
}

hl_status hl_tree_amplitude_series(double s, double t, double alpha_prime, int N, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = hl::tree_amplitude_series(hl::Mandelstam::from_st(s, t, alpha_prime), N);
    });
}

hl_status hl_sigma_n(double s, double t, double alpha_prime, int n, double* direct, double* from_basis)
{
    return guarded([&] {
        auto k = hl::Mandelstam::from_st(s, t, alpha_prime);
        if (direct)
            *direct = hl::sigma_n(k, n);
        if (from_basis)
            *from_basis = hl::sigma_n_from_basis(k, n);
    });
}

hl_status hl_dimension_dn(int n, int* out)
{
    return guarded([&] {
        need(out, "out");
        *out = hl::dimension_dn(n);
    });
}

hl_status hl_genus_one_propagator(double z_re, double z_im, double tau_re, double tau_im, double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = hl::genus_one_propagator({z_re, z_im}, point(tau_re, tau_im));
    });
}

hl_status hl_genus_one_propagator_momentum(double z_re, double z_im, double tau_re, double tau_im, int cutoff,
                                           double* out)
{
    return guarded([&] {
        need(out, "out");
        *out = hl::genus_one_propagator_momentum({z_re, z_im}, point(tau_re, tau_im), cutoff);
    });
}

hl_status hl_kronecker_eisenstein_dn(int n, double tau_re, double tau_im, double cutoff, double* value,
                                     double* est_error)
{
    return guarded([&] {
        need(value, "value");
        auto v = hl::kronecker_eisenstein_Dn(n, point(tau_re, tau_im), lattice_spec(cutoff));
        *value = v.value;
        if (est_error)
            *est_error = v.est_error;
    });
}

hl_status hl_graph_d(const int mult[6], double tau_re, double tau_im, double cutoff, double* value, double* est_error,
                     int* forced_zero, int* loops)
{
    return guarded([&] {
        need(mult, "mult");
        need(value, "value");
        hl::GraphMultiplicities m{};
        for (int i = 0; i < 6; ++i)
            m[std::size_t(i)] = mult[i];
        auto g = hl::graph_D(m, point(tau_re, tau_im), lattice_spec(cutoff));
        *value = g.value;
        if (est_error)
            *est_error = g.est_error;
        if (forced_zero)
            *forced_zero = g.forced_zero ? 1 : 0;
        if (loops)
            *loops = g.loops;
    });
}

hl_status hl_decomposition_probe_json(int n, const double* taus, size_t count, double cutoff, char** out)
{
    return guarded([&] {
        need(taus, "taus");
        need(out, "out");
        std::vector<hl::cplx> list;
        for (std::size_t i = 0; i < count; ++i)
            list.emplace_back(taus[2 * i], taus[2 * i + 1]);
        auto rep = hl::decomposition_probe(n, list, lattice_spec(cutoff));
        nlohmann::ordered_json j;
        j["n"] = rep.n;
        j["basis"] = rep.basis;
        j["coefficients"] = rep.coefficients;
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < rep.taus.size(); ++i)
            pts.push_back({{"tau", {rep.taus[i].real(), rep.taus[i].imag()}},
                           {"value", rep.values[i]},
                           {"est_error", rep.errors[i]},
                           {"residual", rep.residuals[i]},
                           {"relative_residual", rep.relative_residuals[i]}});
        j["points"] = std::move(pts);
        j["max_relative_residual"] = rep.max_relative_residual;
        *out = copy_string(j.dump(2));
    });
}

} // extern "C"
