#include "halphen_lab/halphen.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "halphen_lab/modforms.hpp"

namespace hl {

const char* system_name(System s) noexcept { return s == System::DarbouxHalphen ? "dh" : "lagrange"; }

CVec3 dh_rhs(const TriAxial& state) { return dh_rhs(state.omega); }
CVec3 lagrange_rhs(const TriAxial& state) { return lagrange_rhs(state.omega); }

Vec3 system_rhs(System sys, const Vec3& W) { return sys == System::DarbouxHalphen ? dh_rhs(W) : lagrange_rhs(W); }

Vec3 system_second_derivative(System sys, const Vec3& W)
{
    Vec3 f = system_rhs(sys, W);
    Vec3 out{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        double di, dj, dk; // partial derivatives of f_i
        if (sys == System::DarbouxHalphen) {
            di = -(W[j] + W[k]);
            dj = W[k] - W[i];
            dk = W[j] - W[i];
        } else {
            di = 0.0;
            dj = W[k];
            dk = W[j];
        }
        out[i] = di * f[i] + dj * f[j] + dk * f[k];
    }
    return out;
}

Trajectory integrate(System sys, const RealTriAxial& init, double T_end, double tol, bool stop_on_root)
{
    for (double w : init.Omega)
        require(std::isfinite(w), ErrorCode::InvalidArgument, "integrate: initial Omega must be finite");
    OdeRhs rhs = [sys](double, const std::vector<double>& y, std::vector<double>& dy) {
        Vec3 f = system_rhs(sys, {y[0], y[1], y[2]});
        dy[0] = f[0];
        dy[1] = f[1];
        dy[2] = f[2];
        dy[3] = std::sqrt(std::abs(y[0] * y[1] * y[2]));
    };
    OdeOptions opts;
    opts.tol = tol;
    opts.watched = {0, 1, 2};
    opts.stop_on_root = stop_on_root;
    std::vector<double> y0{init.Omega[0], init.Omega[1], init.Omega[2], 0.0};
    OdeResult res = integrate_ode(rhs, init.T, y0, T_end, opts);

    Trajectory traj;
    traj.system = sys;
    traj.tol = tol;
    traj.accepted = res.accepted;
    traj.rejected = res.rejected;
    traj.reason = res.reason;
    traj.root_times = res.root_times;
    traj.samples.reserve(res.t.size());
    for (std::size_t i = 0; i < res.t.size(); ++i) {
        const auto& y = res.y[i];
        Vec3 W{y[0], y[1], y[2]};
        traj.samples.push_back({res.t[i], W, system_rhs(sys, W), y[3]});
    }
    return traj;
}

Trajectory trajectory_from_states(System sys, const std::vector<RealTriAxial>& states)
{
    require(states.size() >= 2, ErrorCode::InsufficientData, "trajectory needs at least two states");
    Trajectory traj;
    traj.system = sys;
    traj.reason = Termination::Completed;
    double tau = 0.0;
    auto density = [](const Vec3& W, const Vec3& Wd, double& deriv) {
        double f = std::sqrt(std::abs(W[0] * W[1] * W[2]));
        deriv = 0.5 * f * (Wd[0] / W[0] + Wd[1] / W[1] + Wd[2] / W[2]);
        return f;
    };
    for (std::size_t i = 0; i < states.size(); ++i) {
        const RealTriAxial& s = states[i];
        Vec3 Wd = system_rhs(sys, s.Omega);
        if (i > 0) {
            const TrajectorySample& prev = traj.samples.back();
            double h = s.T - prev.T;
            require(h != 0.0 && (i < 2 || (h > 0) == (prev.T > traj.samples[i - 2].T)), ErrorCode::InvalidArgument,
                    "trajectory times must be strictly monotone");
            double da, db;
            double fa = density(prev.Omega, prev.Omega_dot, da);
            double fb = density(s.Omega, Wd, db);
            tau += 0.5 * h * (fa + fb) + h * h / 12.0 * (da - db);
        }
        traj.samples.push_back({s.T, s.Omega, Wd, tau});
    }
    return traj;
}

Trajectory sample_halphen(double T0, double T1, std::size_t n)
{
    require(n >= 2, ErrorCode::InvalidArgument, "sample_halphen: need at least two samples");
    std::vector<RealTriAxial> states;
    states.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        states.push_back(halphen_closed_form_real(T0 + (T1 - T0) * double(i) / double(n - 1)));
    return trajectory_from_states(System::DarbouxHalphen, states);
}

std::vector<TriAxial> integrate_ray(System sys, const TriAxial& init, double theta, double s_end, double tol)
{
    require(s_end > 0.0, ErrorCode::InvalidArgument, "integrate_ray: s_end must be positive");
    const cplx dir = std::exp(I * theta);
    OdeRhs rhs = [sys, dir](double, const std::vector<double>& y, std::vector<double>& dy) {
        CVec3 w{cplx{y[0], y[1]}, cplx{y[2], y[3]}, cplx{y[4], y[5]}};
        CVec3 f = sys == System::DarbouxHalphen ? dh_rhs(w) : lagrange_rhs(w);
        for (int i = 0; i < 3; ++i) {
            cplx d = dir * f[i];
            dy[2 * i] = d.real();
            dy[2 * i + 1] = d.imag();
        }
    };
    std::vector<double> y0;
    for (const cplx& w : init.omega) {
        y0.push_back(w.real());
        y0.push_back(w.imag());
    }
    OdeOptions opts;
    opts.tol = tol;
    OdeResult res = integrate_ode(rhs, 0.0, y0, s_end, opts);
    std::vector<TriAxial> out;
    out.reserve(res.t.size());
    for (std::size_t i = 0; i < res.t.size(); ++i) {
        const auto& y = res.y[i];
        out.push_back({{cplx{y[0], y[1]}, cplx{y[2], y[3]}, cplx{y[4], y[5]}}, init.z + res.t[i] * dir});
    }
    return out;
}

TriAxial halphen_closed_form(cplx z)
{
    ModularPoint tau(z);
    auto logder = [&](ThetaChar ch) {
        return -2.0 * theta_char_tauderiv(ch, 0.0, tau) / theta_char(ch, 0.0, tau);
    };
    return {{logder({0.0, 1.0}), logder({1.0, 0.0}), logder({0.0, 0.0})}, z};
}

RealTriAxial halphen_closed_form_real(double T)
{
    if (!(T > 0.0))
        fail(ErrorCode::DomainError, "halphen_closed_form: T must be positive");
    TriAxial c = halphen_closed_form(cplx{0.0, T});
    RealTriAxial r;
    r.T = T;
    for (int i = 0; i < 3; ++i)
        r.Omega[i] = (I * c.omega[i]).real();
    return r;
}

TriAxial halphen_via_eisenstein(cplx z)
{
    ModularPoint tau(z);
    cplx e2 = eisenstein_holo(2, tau);
    ThetaConstants th = theta_constants(tau);
    cplx t2 = std::pow(th.t2, 4), t3 = std::pow(th.t3, 4), t4 = std::pow(th.t4, 4);
    cplx f = pi / (6.0 * I);
    return {{f * (e2 - t2 - t3), f * (e2 + t3 + t4), f * (e2 + t2 - t4)}, z};
}

ModularTriplet modular_triplet(cplx z)
{
    ThetaConstants th = theta_constants(ModularPoint(z));
    return {I * pi * std::pow(th.t4, 4), -I * pi * std::pow(th.t2, 4), -I * pi * std::pow(th.t3, 4)};
}

ComplexSolution sl2_generate(ComplexSolution sol, const Moebius& m)
{
    return [sol = std::move(sol), m](cplx z) {
        cplx den = m.denominator(z);
        if (std::abs(den) < 1e-12)
            fail(ErrorCode::PoleHit, "sl2_generate: c z + d vanishes");
        TriAxial inner = sol(m.apply(z));
        TriAxial out;
        out.z = z;
        for (int i = 0; i < 3; ++i)
            out.omega[i] = inner.omega[i] / (den * den) + m.c() / den;
        return out;
    };
}

cplx diff1(const std::function<cplx(cplx)>& f, cplx z, double h)
{
    return (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h);
}

cplx diff2(const std::function<cplx(cplx)>& f, cplx z, double h)
{
    return (-f(z + 2.0 * h) + 16.0 * f(z + h) - 30.0 * f(z) + 16.0 * f(z - h) - f(z - 2.0 * h)) / (12.0 * h * h);
}

cplx diff3(const std::function<cplx(cplx)>& f, cplx z, double h)
{
    return (-f(z + 3.0 * h) + 8.0 * f(z + 2.0 * h) - 13.0 * f(z + h) + 13.0 * f(z - h) - 8.0 * f(z - 2.0 * h) +
            f(z - 3.0 * h)) /
           (8.0 * h * h * h);
}

double dh_residual(const ComplexSolution& sol, cplx z, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "dh_residual: h must be positive");
    TriAxial p2 = sol(z + 2.0 * h), p1 = sol(z + h), m1 = sol(z - h), m2 = sol(z - 2.0 * h);
    CVec3 f = dh_rhs(sol(z).omega);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        cplx d = (-p2.omega[i] + 8.0 * p1.omega[i] - 8.0 * m1.omega[i] + m2.omega[i]) / (12.0 * h);
        worst = std::max(worst, std::abs(d - f[i]) / std::max(1.0, std::abs(f[i])));
    }
    return worst;
}

double halphen_real_residual(double T, double h)
{
    if (h == 0.0)
        h = 1e-3 * T;
    require(h > 0.0 && T - 2.0 * h > 0.0, ErrorCode::StepTooLarge, "halphen_real_residual: need 0 < 2h < T");
    auto W = [](double t) { return halphen_closed_form_real(t).Omega; };
    Vec3 p2 = W(T + 2 * h), p1 = W(T + h), m1 = W(T - h), m2 = W(T - 2 * h);
    Vec3 f = system_rhs(System::DarbouxHalphen, W(T));
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        double d = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        worst = std::max(worst, std::abs(d - f[i]) / std::max(1.0, std::abs(f[i])));
    }
    return worst;
}

namespace {
void check_step(cplx z, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "step must be positive");
    if (h > 0.1 * z.imag())
        fail(ErrorCode::StepTooLarge, "step exceeds Im(z)/10");
}
} // namespace

cplx schwarz_lambda(cplx z)
{
    ThetaConstants th = theta_constants(ModularPoint(z));
    return std::pow(th.t2 / th.t3, 4);
}

double schwarz_residual(const std::function<cplx(cplx)>& lambda, cplx z, double h)
{
    check_step(z, h);
    cplx l = lambda(z), l1 = diff1(lambda, z, h), l2 = diff2(lambda, z, h), l3 = diff3(lambda, z, h);
    cplx lhs = l3 / l1 - 1.5 * (l2 / l1) * (l2 / l1);
    cplx rhs = -0.5 * (1.0 / (l * l) + 1.0 / ((l - 1.0) * (l - 1.0)) - 1.0 / (l * (l - 1.0))) * l1 * l1;
    return std::abs(lhs - rhs);
}

ModularTriplet triplet_from_lambda(const std::function<cplx(cplx)>& lambda, cplx z, double h)
{
    check_step(z, h);
    cplx l = lambda(z), l1 = diff1(lambda, z, h);
    if (std::abs(l) < 1e-300 || std::abs(l - 1.0) < 1e-300)
        fail(ErrorCode::SingularLambda, "triplet_from_lambda: lambda hits 0 or 1");
    return {l1 / l, l1 / (l - 1.0), l1 / (l * (l - 1.0))};
}

ChazyData chazy_from_dh(const TriAxial& state)
{
    const CVec3& w = state.omega;
    cplx e1 = w[0] + w[1] + w[2];
    cplx e2 = w[0] * w[1] + w[1] * w[2] + w[2] * w[0];
    cplx e3 = w[0] * w[1] * w[2];
    return {-2.0 * e1, 2.0 * e2, -12.0 * e3};
}

double chazy_residual(const std::function<cplx(cplx)>& y, cplx z, double h)
{
    check_step(z, h);
    cplx y0 = y(z), y1 = diff1(y, z, h), y2 = diff2(y, z, h), y3 = diff3(y, z, h);
    return std::abs(y3 - 2.0 * y0 * y2 + 3.0 * y1 * y1);
}

CVec3 chazy_cubic_roots(const ChazyData& data, const CVec3& reference)
{
    const cplx c2 = 0.5 * data.y, c1 = 0.5 * data.y_prime, c0 = data.y_double_prime / 12.0;
    Eigen::Matrix3cd companion;
    companion << -c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, false);
    CVec3 roots;
    for (int i = 0; i < 3; ++i) {
        cplx r = solver.eigenvalues()(i);
        for (int it = 0; it < 4; ++it) {
            cplx p = ((r + c2) * r + c1) * r + c0;
            cplx dp = (3.0 * r + 2.0 * c2) * r + c1;
            if (std::abs(dp) == 0.0)
                break;
            r -= p / dp;
        }
        roots[i] = r;
    }
    std::array<int, 3> perm{0, 1, 2}, best = perm;
    double best_cost = INFINITY;
    do {
        double cost = 0.0;
        for (int i = 0; i < 3; ++i)
            cost += std::abs(roots[perm[i]] - reference[i]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {roots[best[0]], roots[best[1]], roots[best[2]]};
}

Vec3 reflection_check(double T)
{
    if (!(T > 0.0) || T < ModularPoint::min_imag || 1.0 / T < ModularPoint::min_imag)
        fail(ErrorCode::DomainError, "reflection_check: T and 1/T must both be >= 0.05");
    Vec3 a = halphen_closed_form_real(T).Omega;
    Vec3 b = halphen_closed_form_real(1.0 / T).Omega;
    const double inv = 1.0 / T;
    return {std::abs(a[0] + inv * inv * b[1] - inv), std::abs(a[1] + inv * inv * b[0] - inv),
            std::abs(a[2] + inv * inv * b[2] - inv)};
}

} // namespace hl
