#include "halphen_lab/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "halphen_lab/maass.hpp"
#include "halphen_lab/modforms.hpp"

namespace hl {

std::array<cplx, 6> systems_rhs(const ConformalState& st)
{
    const auto& d = st.delta;
    const auto& w = st.omega;
    std::array<cplx, 6> out{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        out[i] = d[j] * d[k] - d[i] * (d[j] + d[k]);
        out[3 + i] = w[j] * w[k] - w[i] * (d[j] + d[k]);
    }
    return out;
}

CVec3 derived_B(const ConformalState& st)
{
    const auto& d = st.delta;
    const auto& w = st.omega;
    CVec3 pair{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        require(std::abs(w[i]) > 0.0, ErrorCode::DegenerateMetric, "derived_B: omega component vanishes");
        pair[i] = (2.0 * w[j] * w[k] - w[i] * (d[j] + d[k])) / w[i];
    }
    CVec3 B{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        B[i] = 0.5 * (pair[j] + pair[k] - pair[i]);
    }
    return B;
}

cplx first_integral(const CVec3& w) { return w[0] * w[0] - w[1] * w[1] + w[2] * w[2]; }

WVars w_theta_solution(cplx a, cplx b, cplx z, const QTruncation& trunc)
{
    ModularPoint tau(z);
    auto c = theta_constants(tau, trunc);
    cplx den = theta_char({a, b}, 0.0, tau, trunc);
    if (std::abs(den) < 1e-12)
        fail(ErrorCode::ThetaZeroDivision, "w_theta_solution: theta[a;b](0|z) vanishes");
    auto dv = [&](cplx A, cplx B) { return theta_char_vderiv({A, B}, 0.0, tau, trunc); };
    cplx phase = std::exp(-I * pi * a / 2.0);
    WVars out;
    out.w[0] = dv(a + 1.0, b) / (den * 2.0 * pi * c.t2 * c.t3);
    out.w[1] = phase * dv(a, b + 1.0) / (den * 2.0 * pi * c.t3 * c.t4);
    out.w[2] = -phase * dv(a + 1.0, b + 1.0) / (den * 2.0 * pi * c.t2 * c.t4);
    out.lambda = std::pow(c.t2 / c.t3, 4);
    return out;
}

WVars ah_limit_solution(cplx z0, cplx z)
{
    if (std::abs(z + z0) < 1e-12)
        fail(ErrorCode::PoleHit, "ah_limit_solution: z = -z0");
    ModularPoint tau(z);
    auto c = theta_constants(tau);
    cplx e2 = eisenstein_holo(2, tau);
    cplx s2 = c.t2 * c.t2, s3 = c.t3 * c.t3, s4 = c.t4 * c.t4;
    cplx r = I / (z + z0);
    WVars out;
    out.w[0] = -1.0 / (pi * s2 * s3) * (r - pi / 6.0 * (e2 - s2 * s2 - s3 * s3));
    out.w[1] = -I / (pi * s3 * s4) * (r - pi / 6.0 * (e2 + s3 * s3 + s4 * s4));
    out.w[2] = -I / (pi * s2 * s4) * (r - pi / 6.0 * (e2 + s2 * s2 - s4 * s4));
    out.lambda = std::pow(c.t2 / c.t3, 4);
    return out;
}

ConformalState halphen_conformal_state(const CVec3& w, cplx z)
{
    ModularPoint tau(z);
    auto c = theta_constants(tau);
    cplx s2 = c.t2 * c.t2, s3 = c.t3 * c.t3, s4 = c.t4 * c.t4;
    ConformalState st;
    st.z = z;
    st.delta = halphen_closed_form(z).omega;
    st.omega = {I * pi * s2 * s3 * w[0], pi * s3 * s4 * w[1], -pi * s2 * s4 * w[2]};
    return st;
}

ConformalSolution conformal_theta_solution(cplx a, cplx b)
{
    return [a, b](cplx z) { return halphen_conformal_state(w_theta_solution(a, b, z).w, z); };
}

ConformalSolution sl2_generate_conformal(ConformalSolution sol, const Moebius& m)
{
    return [sol = std::move(sol), m](cplx z) {
        cplx den = m.denominator(z);
        cplx zt = m.apply(z);
        ConformalState inner = sol(zt);
        ConformalState out;
        out.z = z;
        for (int i = 0; i < 3; ++i) {
            out.delta[i] = inner.delta[i] / (den * den) + m.c() / den;
            out.omega[i] = inner.omega[i] / (den * den);
        }
        return out;
    };
}

double conformal_residual(const ConformalSolution& sol, cplx z, double h)
{
    ConformalState st = sol(z);
    auto rhs = systems_rhs(st);
    double worst = 0.0;
    for (int c = 0; c < 6; ++c) {
        auto comp = [&](cplx x) {
            ConformalState s = sol(x);
            return c < 3 ? s.delta[c] : s.omega[c - 3];
        };
        cplx d = diff1(comp, z, h);
        worst = std::max(worst, std::abs(d - rhs[c]) / std::max(1.0, std::abs(rhs[c])));
    }
    return worst;
}

double w_ode_residual(const std::function<CVec3(cplx)>& w, cplx z, double h)
{
    ModularPoint tau(z);
    auto c = theta_constants(tau);
    CVec3 v = w(z);
    CVec3 rhs{I * pi * std::pow(c.t4, 4) * v[1] * v[2], -I * pi * std::pow(c.t2, 4) * v[2] * v[0],
              -I * pi * std::pow(c.t3, 4) * v[0] * v[1]};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        cplx d = diff1([&](cplx x) { return w(x)[i]; }, z, h);
        worst = std::max(worst, std::abs(d - rhs[i]) / std::max(1.0, std::abs(rhs[i])));
    }
    return worst;
}

WLambdaReport w_lambda_system_residual(const std::function<WVars(cplx)>& path, const std::vector<cplx>& zs,
                                       double h, double margin)
{
    if (zs.empty())
        fail(ErrorCode::InsufficientData, "w_lambda_system_residual: empty path");
    WLambdaReport rep;
    bool first = true;
    for (cplx z : zs) {
        WVars v = path(z);
        cplx l = v.lambda;
        if (!std::isfinite(std::abs(l)) || std::abs(l) < margin || std::abs(l - 1.0) < margin)
            fail(ErrorCode::SingularLambda, "w_lambda_system_residual: lambda near a branch point");
        cplx dl = diff1([&](cplx x) { return path(x).lambda; }, z, h);
        if (std::abs(dl) < 1e-10 * std::max(1.0, std::abs(l)))
            fail(ErrorCode::SingularLambda, "w_lambda_system_residual: lambda is stationary along the path");
        const auto& w = v.w;
        CVec3 rhs{w[1] * w[2] / l, w[2] * w[0] / (l - 1.0), w[0] * w[1] / (l * (l - 1.0))};
        for (int i = 0; i < 3; ++i) {
            cplx dw = diff1([&](cplx x) { return path(x).w[i]; }, z, h) / dl;
            rep.max_residual = std::max(rep.max_residual, std::abs(dw - rhs[i]) / std::max(1.0, std::abs(rhs[i])));
        }
        cplx fi = first_integral(w);
        if (first) {
            rep.first_integral = fi;
            first = false;
        }
        rep.first_integral_drift = std::max(rep.first_integral_drift, std::abs(fi - rep.first_integral));
    }
    return rep;
}

std::function<WVars(cplx)> halphen_w_path(cplx a, cplx b)
{
    return [a, b](cplx z) { return w_theta_solution(a, b, z); };
}

double cp_harmonic_check(const CPField& F, double rho, double eta, double h)
{
    if (!(h > 0.0) || !(rho > 2.0 * h))
        fail(ErrorCode::StepTooLarge, "cp_harmonic_check: need rho > 2h");
    auto d2 = [h](double fm2, double fm1, double f0, double fp1, double fp2) {
        return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    };
    double f0 = F(rho, eta);
    double frr = d2(F(rho - 2 * h, eta), F(rho - h, eta), f0, F(rho + h, eta), F(rho + 2 * h, eta));
    double fee = d2(F(rho, eta - 2 * h), F(rho, eta - h), f0, F(rho, eta + h), F(rho, eta + 2 * h));
    return std::abs(rho * rho * (frr + fee) - 0.75 * f0) / std::abs(f0);
}

CPField cp_field_cp2()
{
    return [](double rho, double eta) { return std::sqrt(rho + eta * eta / rho); };
}

CPField cp_field_heisenberg(double rho0)
{
    return [rho0](double rho, double) { return (rho * rho - rho0 * rho0) / (2.0 * std::sqrt(rho)); };
}

CPField cp_field_eisenstein(double s)
{
    return [s](double rho, double eta) {
        cplx tau(eta, rho);
        return eisenstein_fourier(s, ModularPoint(tau), fourier_modes_for(s, ModularPoint(tau))).value;
    };
}

AsdCheck asd_curvature_check(const RealConformalState& st)
{
    const Vec3& O = st.Omega;
    const Vec3& D = st.Delta;
    Vec3 Dd{}, Od{}, Odd{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        Dd[i] = D[j] * D[k] - D[i] * (D[j] + D[k]);
        Od[i] = O[j] * O[k] - O[i] * (D[j] + D[k]);
    }
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        Odd[i] = Od[j] * O[k] + O[j] * Od[k] - Od[i] * (D[j] + D[k]) - O[i] * (Dd[j] + Dd[k]);
    }
    CurvatureDecomp dec = curvature_decomp({O, st.T}, Od, Odd);
    Mat3 expected = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        expected(i, i) = (D[j] * D[k] / (O[j] * O[k]) - D[i] / O[i]) / O[i];
    }
    AsdCheck out;
    out.c_minus_residual = (dec.Cminus() - expected).norm() / std::max(1.0, expected.norm());
    out.wminus_norm = dec.Wminus.norm();
    out.scalar = std::abs(dec.s);
    return out;
}

} // namespace hl
