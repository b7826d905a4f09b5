#ifndef HALPHEN_LAB_CONFORMAL_HPP
#define HALPHEN_LAB_CONFORMAL_HPP

#include <array>
#include <functional>
#include <vector>

#include "halphen_lab/geometry.hpp"

namespace hl {

/// Variables of the W- = s = 0 systems: delta (system I) and omega (system II).
struct ConformalState {
    CVec3 delta{};
    CVec3 omega{};
    cplx z{};
};

/// d/dz of (delta, omega).
std::array<cplx, 6> systems_rhs(const ConformalState& state);

/// The companion triple B_i with omega_i' = -omega_j omega_k + omega_i (B_j + B_k).
CVec3 derived_B(const ConformalState& state);

struct WVars {
    CVec3 w{};
    cplx lambda{};
};

cplx first_integral(const CVec3& w);

WVars w_theta_solution(cplx a, cplx b, cplx z, const QTruncation& trunc = {});

/// Limit a = 1 + 2e, b = 1 + 2 z0 e, e -> 0, of w_theta_solution.
WVars ah_limit_solution(cplx z0, cplx z);

/// Conformal state built on the Halphen solution of system I:
/// omega^i = w_i sqrt(E^j E^k) with the modular triplet of the Halphen solution.
ConformalState halphen_conformal_state(const CVec3& w, cplx z);

using ConformalSolution = std::function<ConformalState(cplx)>;

ConformalSolution conformal_theta_solution(cplx a, cplx b);
ConformalSolution sl2_generate_conformal(ConformalSolution sol, const Moebius& m);

/// Max relative residual of systems I and II, fourth-order central differences.
double conformal_residual(const ConformalSolution& sol, cplx z, double h);

/// Residual of w' against (i pi th4^4 w2 w3, -i pi th2^4 w3 w1, -i pi th3^4 w1 w2).
double w_ode_residual(const std::function<CVec3(cplx)>& w, cplx z, double h);

struct WLambdaReport {
    double max_residual = 0.0;
    double first_integral_drift = 0.0;
    cplx first_integral{};
};

/// Residuals of dw/dlambda = (w2 w3/l, w3 w1/(l-1), w1 w2/(l(l-1))) along a path in z.
WLambdaReport w_lambda_system_residual(const std::function<WVars(cplx)>& path, const std::vector<cplx>& zs,
                                       double h, double margin = 0.05);

/// Path z -> (w_theta_solution(a, b, z), lambda_H(z)).
std::function<WVars(cplx)> halphen_w_path(cplx a, cplx b);

using CPField = std::function<double(double rho, double eta)>;

double cp_harmonic_check(const CPField& F, double rho, double eta, double h);

CPField cp_field_cp2();
CPField cp_field_heisenberg(double rho0);
CPField cp_field_eisenstein(double s);

/// Real section Omega(T) = i omega(iT), Delta(T) = i delta(iT).
struct RealConformalState {
    Vec3 Delta{};
    Vec3 Omega{};
    double T = 0.0;
};

/// ||C- - diag((1/O_i)(D_j D_k/(O_j O_k) - D_i/O_i))|| together with |W-| and |s|.
struct AsdCheck {
    double c_minus_residual = 0.0;
    double wminus_norm = 0.0;
    double scalar = 0.0;
};

AsdCheck asd_curvature_check(const RealConformalState& state);

} // namespace hl

#endif
