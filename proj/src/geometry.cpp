#include "halphen_lab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "halphen_lab/ode.hpp"

namespace hl {

namespace {

struct Dual {
    double v = 0.0;
    double d = 0.0;
};

Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
Dual operator-(Dual a) { return {-a.v, -a.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }
Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual dsqrt(Dual a)
{
    double r = std::sqrt(a.v);
    return {r, 0.5 * a.d / r};
}
Dual dabs(Dual a) { return a.v < 0.0 ? -a : a; }

using Tensor3 = std::array<std::array<std::array<double, 4>, 4>, 4>;

struct Frame {
    Tensor3 C{};    // structure constants C^a_bc
    Tensor3 Cdot{}; // their T-derivatives
    double N = 0.0; // lapse, theta^0 = N dT
};

Frame build_frame(const Vec3& W, const Vec3& Wd, const Vec3& Wdd)
{
    for (double w : W)
        if (w == 0.0 || !std::isfinite(w))
            fail(ErrorCode::DegenerateMetric, "curvature: every Omega must be finite and non-zero");
    Dual O[3], Od[3];
    for (int i = 0; i < 3; ++i) {
        O[i] = {W[i], Wd[i]};
        Od[i] = {Wd[i], Wdd[i]};
    }
    // With O1 O2 O3 < 0 the lapse is taken negative, which reverses the
    // orientation and keeps every real Darboux-Halphen solution self-dual.
    Dual Pi = O[0] * O[1] * O[2];
    Dual N = dsqrt(dabs(Pi));
    if (Pi.v < 0.0)
        N = -N;
    Dual a[3], L[3];
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        a[i] = dsqrt(dabs(O[j] * O[k] / O[i]));
        L[i] = 0.5 * (Od[j] / O[j] + Od[k] / O[k] - Od[i] / O[i]);
    }
    Frame f;
    f.N = N.v;
    auto put = [&](int A, int B, int Cc, Dual value) {
        f.C[A][B][Cc] = value.v;
        f.Cdot[A][B][Cc] = value.d;
        f.C[A][Cc][B] = -value.v;
        f.Cdot[A][Cc][B] = -value.d;
    };
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        put(i + 1, 0, i + 1, -(L[i] / N));
        put(i + 1, j + 1, k + 1, a[i] / (a[j] * a[k]));
    }
    return f;
}

// Connection coefficients Gamma_abc with omega_ab = Gamma_abc theta^c, solving
// Gamma_abc - Gamma_acb = -C_abc with Gamma_abc = -Gamma_bac.
Tensor3 connection_from(const Tensor3& C)
{
    Tensor3 G{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                G[a][b][c] = 0.5 * (-C[a][b][c] - C[b][c][a] + C[c][a][b]);
    return G;
}

using Riemann = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;

// R_ab = d omega_ab + omega_ac ^ omega_cb, stored as R[a][b][d][e] with
// R_ab = 1/2 R[a][b][d][e] theta^d ^ theta^e.
Riemann riemann(const Frame& f)
{
    Tensor3 G = connection_from(f.C);
    Tensor3 Gd = connection_from(f.Cdot);
    Riemann R{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int d = 0; d < 4; ++d)
                for (int e = 0; e < 4; ++e) {
                    double v = 0.0;
                    if (d == 0)
                        v += Gd[a][b][e] / f.N;
                    if (e == 0)
                        v -= Gd[a][b][d] / f.N;
                    for (int c = 0; c < 4; ++c) {
                        v -= G[a][b][c] * f.C[c][d][e];
                        v += G[a][c][d] * G[c][b][e] - G[a][c][e] * G[c][b][d];
                    }
                    R[a][b][d][e] = v;
                }
    return R;
}

using TwoForm = std::array<std::array<double, 4>, 4>;

} // namespace

ConnectionCoeffs connection(const RealTriAxial& state, const Vec3& Wd)
{
    const Vec3& W = state.Omega;
    for (double w : W)
        if (w == 0.0 || !std::isfinite(w))
            fail(ErrorCode::DegenerateMetric, "connection: every Omega must be finite and non-zero");
    double prod = W[0] * W[1] * W[2];
    if (!(prod > 0.0))
        fail(ErrorCode::DegenerateMetric, "connection: Omega1 Omega2 Omega3 must be positive");
    double pref = 1.0 / (4.0 * std::sqrt(prod));
    ConnectionCoeffs out;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        auto term = [&](int m, double sign) {
            int n1 = (m + 1) % 3, n2 = (m + 2) % 3;
            return (Wd[m] + sign * W[n1] * W[n2]) / W[m];
        };
        out.sigma[i] = pref * (term(i, 1.0) - term(j, 1.0) - term(k, 1.0));
        out.a[i] = pref * (term(i, -1.0) - term(j, -1.0) - term(k, -1.0));
    }
    return out;
}

CurvatureDecomp curvature_decomp(const RealTriAxial& state, const Vec3& Wd, const Vec3& Wdd)
{
    Frame f = build_frame(state.Omega, Wd, Wdd);
    Riemann R = riemann(f);

    // Self-dual and anti-self-dual curvature two-forms S_i, A_i.
    std::array<TwoForm, 3> S{}, A{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3 + 1, k = (i + 2) % 3 + 1;
        for (int d = 0; d < 4; ++d)
            for (int e = 0; e < 4; ++e) {
                S[i][d][e] = 0.5 * (R[0][i + 1][d][e] + R[j][k][d][e]);
                A[i][d][e] = 0.5 * (R[0][i + 1][d][e] - R[j][k][d][e]);
            }
    }
    // Components on phi^j = theta^0 ^ theta^j + theta^k ^ theta^l and chi^j.
    auto phi = [](const TwoForm& F, int j) {
        int k = (j + 1) % 3 + 1, l = (j + 2) % 3 + 1;
        return 0.5 * (F[0][j + 1] + F[k][l]);
    };
    auto chi = [](const TwoForm& F, int j) {
        int k = (j + 1) % 3 + 1, l = (j + 2) % 3 + 1;
        return 0.5 * (F[0][j + 1] - F[k][l]);
    };
    Mat3 Ablk, Bblk, Cp, Cm;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Ablk(i, j) = 2.0 * phi(S[i], j);
            Cp(i, j) = 2.0 * chi(S[i], j);
            Cm(i, j) = 2.0 * phi(A[i], j);
            Bblk(i, j) = 2.0 * chi(A[i], j);
        }
    CurvatureDecomp dec;
    dec.s = Ablk.trace() + Bblk.trace();
    dec.Wplus = Ablk - dec.s / 6.0 * Mat3::Identity();
    dec.Wminus = Bblk - dec.s / 6.0 * Mat3::Identity();
    dec.Cplus = Cp;
    dec.cross_asymmetry = (Cp - Cm.transpose()).norm();
    return dec;
}

Mat4 ricci_from_frame(const RealTriAxial& state, const Vec3& Wd, const Vec3& Wdd)
{
    Riemann R = riemann(build_frame(state.Omega, Wd, Wdd));
    Mat4 Ric = Mat4::Zero();
    for (int b = 0; b < 4; ++b)
        for (int d = 0; d < 4; ++d)
            for (int a = 0; a < 4; ++a)
                Ric(b, d) += R[a][b][a][d];
    return Ric;
}

CurvatureDecomp curvature_on_system(System sys, const RealTriAxial& state)
{
    return curvature_decomp(state, system_rhs(sys, state.Omega), system_second_derivative(sys, state.Omega));
}

Mat4 CurvatureDecomp::traceless_ricci() const
{
    Mat3 Cm = Cminus();
    Mat4 S = Mat4::Zero();
    S(0, 0) = Cplus.trace();
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        double v = Cm(j, k) - Cm(k, j);
        S(0, i + 1) = v;
        S(i + 1, 0) = v;
        for (int m = 0; m < 3; ++m)
            S(i + 1, m + 1) = Cplus(i, m) + Cm(i, m) - (i == m ? Cplus.trace() : 0.0);
    }
    return S;
}

double CurvatureDecomp::riemann_norm() const
{
    double d = s / 6.0;
    Mat3 A = Wplus + d * Mat3::Identity();
    Mat3 B = Wminus + d * Mat3::Identity();
    return std::sqrt(A.squaredNorm() + B.squaredNorm() + 2.0 * Cplus.squaredNorm());
}

GeometryFlags classify_geometry(const CurvatureDecomp& dec, double tol)
{
    const bool wp = dec.Wplus.norm() < tol;
    const bool wm = dec.Wminus.norm() < tol;
    const bool c = dec.Cplus.norm() < tol;
    const bool s = std::abs(dec.s) < tol;
    GeometryFlags f;
    f.einstein = c;
    f.ricci_flat = c && s;
    f.self_dual = wm && c && s;
    f.anti_self_dual = wp && c && s;
    f.conformally_self_dual = wm;
    f.conformally_anti_self_dual = wp;
    f.conformally_flat = wp && wm;
    return f;
}

OnShellWeyl onshell_weyl(const CurvatureDecomp& dec, double Lambda)
{
    OnShellWeyl w;
    double scalar = (dec.s - 2.0 * Lambda) / 12.0;
    w.plus = {dec.Wplus, scalar, 0.5 * dec.Cplus};
    w.minus = {dec.Wminus, scalar, 0.5 * dec.Cminus()};
    return w;
}

double self_duality_defect(const CurvatureDecomp& dec)
{
    return (dec.Wminus.norm() + dec.Cplus.norm() + std::abs(dec.s)) / (1.0 + dec.Wplus.norm());
}

double anti_self_duality_defect(const CurvatureDecomp& dec)
{
    return (dec.Wplus.norm() + dec.Cplus.norm() + std::abs(dec.s)) / (1.0 + dec.Wminus.norm());
}

CurvatureDecomp taub_nut_check(double m, double r)
{
    if (!(m > 0.0) || !(r > m) || !std::isfinite(r))
        fail(ErrorCode::DomainError, "taub_nut_check needs m > 0 and r > m");
    const double T_star = -1.0 / (m * m);
    const double T = 2.0 / (m * (r - m));
    RealTriAxial st{{1.0 / T, 1.0 / T, (T - T_star) / (T * T)}, T};
    return curvature_on_system(System::DarbouxHalphen, st);
}

const char* endpoint_kind_name(EndpointKind k) noexcept
{
    switch (k) {
    case EndpointKind::Nut: return "nut";
    case EndpointKind::Bolt: return "bolt";
    case EndpointKind::TaubianInfinity: return "taubian_infinity";
    case EndpointKind::CurvatureSingularity: return "curvature_singularity";
    case EndpointKind::Undetermined: return "undetermined";
    }
    return "unknown";
}

namespace {

struct EndPoint {
    double T;
    Vec3 Omega;
    double tau;
};

double density(const Vec3& W) { return std::sqrt(std::abs(W[0] * W[1] * W[2])); }

Vec3 frame_coeffs(const Vec3& W)
{
    return {std::sqrt(std::abs(W[1] * W[2] / W[0])), std::sqrt(std::abs(W[2] * W[0] / W[1])),
            std::sqrt(std::abs(W[0] * W[1] / W[2]))};
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / double(n));
    return f;
}

// Re-integrates the system from `from` to each target in order.
std::vector<EndPoint> reintegrate(System sys, const EndPoint& from, const std::vector<double>& targets, double tol)
{
    std::vector<EndPoint> out;
    EndPoint cur = from;
    for (double T : targets) {
        if (T == cur.T)
            continue;
        Trajectory seg = integrate(sys, {cur.Omega, cur.T}, T, tol, false);
        const TrajectorySample& last = seg.samples.back();
        if (seg.reason != Termination::Completed || last.T != T)
            break;
        cur = {T, last.Omega, cur.tau + last.tau};
        out.push_back(cur);
    }
    return out;
}

} // namespace

EndpointClass classify_endpoint(const Trajectory& traj, EndpointSide end)
{
    const auto& smp = traj.samples;
    if (smp.size() < 4)
        fail(ErrorCode::InsufficientData, "classify_endpoint: trajectory too short");
    const bool increasing = smp.back().T > smp.front().T;
    if (increasing != (end == EndpointSide::Upper))
        fail(ErrorCode::InsufficientData, "classify_endpoint: trajectory does not run toward the requested end");
    const double dir = increasing ? 1.0 : -1.0;
    const double tol = traj.tol > 0.0 ? traj.tol : 1e-10;

    std::vector<EndPoint> pts;
    pts.reserve(smp.size());
    for (const auto& s : smp)
        pts.push_back({s.T, s.Omega, s.tau});
    const double tau_ref = pts.front().tau;
    const bool finite_end = traj.reason != Termination::Completed;

    // Endpoint location for finite ends.
    double T_end = pts.back().T;
    if (traj.reason == Termination::Blowup) {
        // For a pole Omega ~ A / delta^k, Omega / Omega' = delta / k.
        const auto& a = smp[smp.size() - 2];
        const auto& b = smp.back();
        int c = 0;
        for (int i = 1; i < 3; ++i)
            if (std::abs(b.Omega[i]) > std::abs(b.Omega[c]))
                c = i;
        double ra = a.Omega[c] / a.Omega_dot[c];
        double rb = b.Omega[c] / b.Omega_dot[c];
        double k = std::abs((b.T - a.T) / (rb - ra));
        T_end = b.T + dir * k * std::abs(rb);
    }

    if (traj.reason == Termination::RootCrossing) {
        // Geometric approach to the root from the previous sample.
        EndPoint start = pts[pts.size() - 2];
        double d0 = std::abs(T_end - start.T);
        std::vector<double> targets;
        for (int j = 1; j <= 70; ++j) {
            double d = d0 * std::pow(10.0, -j / 10.0);
            if (d < 1e-8 * std::max(1.0, std::abs(T_end)))
                break;
            targets.push_back(T_end - dir * d);
        }
        pts.pop_back();
        auto extra = reintegrate(traj.system, start, targets, tol);
        pts.insert(pts.end(), extra.begin(), extra.end());
    } else if (pts.size() < 40 && traj.system == System::DarbouxHalphen) {
        // Sparse trajectory: subdivide the last intervals.
        std::vector<EndPoint> dense{pts.front()};
        std::size_t first = pts.size() > 20 ? pts.size() - 20 : 1;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (i >= first) {
                std::vector<double> targets;
                for (int j = 1; j < 8; ++j)
                    targets.push_back(pts[i - 1].T + (pts[i].T - pts[i - 1].T) * j / 8.0);
                auto extra = reintegrate(traj.system, pts[i - 1], targets, tol);
                dense.insert(dense.end(), extra.begin(), extra.end());
            }
            dense.push_back(pts[i]);
        }
        pts.swap(dense);
    }

    // Distance to the end in proper time, or proper time from the interior
    // reference when the integral diverges.
    const std::size_t n = pts.size();
    std::vector<double> lx, lf;
    std::size_t tail_from = n > 12 ? n - 12 : 0;
    for (std::size_t i = tail_from; i < n; ++i) {
        double f = density(pts[i].Omega);
        double arg = finite_end ? std::abs(T_end - pts[i].T) : std::abs(pts[i].T);
        if (arg <= 0.0 || f <= 0.0)
            continue;
        lx.push_back(arg);
        lf.push_back(std::log(f));
    }
    if (lx.size() < 4)
        fail(ErrorCode::InsufficientData, "classify_endpoint: not enough samples near the end");

    bool divergent = false;
    double tail = 0.0;
    const EndPoint& last = pts.back();
    const double f_last = density(last.Omega);
    if (finite_end) {
        std::vector<double> logd;
        for (double d : lx)
            logd.push_back(std::log(d));
        double p = fit_line(logd, lf).slope;
        if (p > -0.9)
            tail = f_last * std::abs(T_end - last.T) / (p + 1.0);
        else
            divergent = true;
    } else {
        std::vector<double> logT;
        for (double t : lx)
            logT.push_back(std::log(t));
        LineFit pw = fit_line(logT, lf);
        LineFit ex = fit_line(lx, lf);
        // Slopes are against |T|, which grows toward the end.
        if (pw.rms <= ex.rms) {
            if (pw.slope < -1.1)
                tail = f_last * std::abs(last.T) / (-pw.slope - 1.0);
            else
                divergent = true;
        } else {
            if (ex.slope < 0.0)
                tail = f_last / -ex.slope;
            else
                divergent = true;
        }
    }

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = divergent ? std::abs(pts[i].tau - tau_ref) : tail + std::abs(last.tau - pts[i].tau);

    // Fit window: the last decade of proper time.
    std::vector<std::size_t> window;
    if (divergent) {
        double xmax = *std::max_element(x.begin(), x.end());
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] >= xmax / 10.0 && x[i] > 0.0)
                window.push_back(i);
    } else {
        double xmin = INFINITY;
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] > 0.0)
                xmin = std::min(xmin, x[i]);
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] > 0.0 && x[i] <= 10.0 * xmin)
                window.push_back(i);
    }
    if (window.size() < 4)
        fail(ErrorCode::InsufficientData, "classify_endpoint: fewer than four samples in the last proper-time decade");

    EndpointClass out;
    std::vector<double> lxw;
    for (std::size_t i : window)
        lxw.push_back(std::log(x[i]));
    double worst_rms = 0.0;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> la;
        for (std::size_t i : window)
            la.push_back(std::log(frame_coeffs(pts[i].Omega)[c]));
        LineFit f = fit_line(lxw, la);
        out.exponents[c] = f.slope;
        worst_rms = std::max(worst_rms, f.rms);
    }
    out.fit_quality = std::clamp(1.0 - worst_rms, 0.0, 1.0);

    constexpr double etol = 0.05;
    auto near = [&](double v, double target) { return std::abs(v - target) <= etol; };
    Vec3 e = out.exponents;
    Vec3 sorted = e;
    std::sort(sorted.begin(), sorted.end());
    // Frame coefficients at the sample closest to the end.
    std::size_t closest = window.front();
    for (std::size_t i : window)
        if (divergent ? x[i] > x[closest] : x[i] < x[closest])
            closest = i;
    Vec3 a_end = frame_coeffs(pts[closest].Omega);

    if (!divergent && near(sorted[0], 1.0) && near(sorted[2], 1.0)) {
        out.kind = EndpointKind::Nut;
    } else if (!divergent && near(sorted[0], 0.0) && near(sorted[1], 0.0) && near(sorted[2], 1.0)) {
        out.kind = EndpointKind::Bolt;
        double zsum = 0.0;
        for (int c = 0; c < 3; ++c) {
            if (near(e[c], 1.0))
                out.n = 2.0 * a_end[c] / x[closest];
            else
                zsum += a_end[c];
        }
        out.zeta = 0.5 * zsum;
    } else if (divergent && near(sorted[0], 0.0) && near(sorted[1], 1.0) && near(sorted[2], 1.0)) {
        out.kind = EndpointKind::TaubianInfinity;
    } else if (!divergent && near(sorted[0], -1.0 / 3.0) && near(sorted[1], 1.0 / 3.0) && near(sorted[2], 1.0 / 3.0)) {
        out.kind = EndpointKind::CurvatureSingularity;
    }
    return out;
}

} // namespace hl
