#ifndef HALPHEN_LAB_HALPHEN_HPP
#define HALPHEN_LAB_HALPHEN_HPP

#include <functional>
#include <vector>

#include "halphen_lab/ode.hpp"
#include "halphen_lab/types.hpp"

namespace hl {

enum class System { DarbouxHalphen, Lagrange };

const char* system_name(System s) noexcept;

struct TriAxial {
    CVec3 omega{};
    cplx z{};
};

struct RealTriAxial {
    Vec3 Omega{};
    double T = 0.0;
};

struct ModularTriplet {
    cplx E1, E2, E3;
};

struct ChazyData {
    cplx y, y_prime, y_double_prime;
};

struct TrajectorySample {
    double T;
    Vec3 Omega;
    Vec3 Omega_dot;
    // Proper time accumulated from the first sample, integral of sqrt|Omega1 Omega2 Omega3| dT.
    double tau;
};

struct Trajectory {
    System system = System::DarbouxHalphen;
    std::vector<TrajectorySample> samples;
    double tol = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    Termination reason = Termination::Completed;
    std::vector<double> root_times;
};

template <class S>
std::array<S, 3> dh_rhs(const std::array<S, 3>& w)
{
    return {w[1] * w[2] - w[0] * (w[1] + w[2]), w[2] * w[0] - w[1] * (w[2] + w[0]), w[0] * w[1] - w[2] * (w[0] + w[1])};
}

template <class S>
std::array<S, 3> lagrange_rhs(const std::array<S, 3>& w)
{
    return {w[1] * w[2], w[2] * w[0], w[0] * w[1]};
}

CVec3 dh_rhs(const TriAxial& state);
CVec3 lagrange_rhs(const TriAxial& state);
Vec3 system_rhs(System sys, const Vec3& Omega);
/// Second T-derivative along the system, from the chain rule on its RHS.
Vec3 system_second_derivative(System sys, const Vec3& Omega);

Trajectory integrate(System sys, const RealTriAxial& init, double T_end, double tol, bool stop_on_root = true);

/// Builds a trajectory from externally computed states on a solution of sys;
/// proper time uses the endpoint-corrected trapezoid rule.
Trajectory trajectory_from_states(System sys, const std::vector<RealTriAxial>& states);

/// Closed-form Halphen solution sampled at n uniformly spaced T in [T0, T1].
Trajectory sample_halphen(double T0, double T1, std::size_t n);

/// Integrates along the ray z(s) = z0 + s e^{i theta}, s in [0, s_end].
std::vector<TriAxial> integrate_ray(System sys, const TriAxial& init, double theta, double s_end, double tol);

TriAxial halphen_closed_form(cplx z);
RealTriAxial halphen_closed_form_real(double T);
/// The same solution evaluated through E2 and fourth powers of theta constants.
TriAxial halphen_via_eisenstein(cplx z);

/// Weight-2 forms whose log-derivatives give the Halphen solution.
ModularTriplet modular_triplet(cplx z);

using ComplexSolution = std::function<TriAxial(cplx)>;
ComplexSolution sl2_generate(ComplexSolution sol, const Moebius& m);

/// Componentwise |omega(z)' - f(omega(z))| with a fourth-order central difference.
double dh_residual(const ComplexSolution& sol, cplx z, double h);

/// The same residual for the real closed form in T; h = 0 picks 1e-3 T.
double halphen_real_residual(double T, double h = 0.0);

cplx schwarz_lambda(cplx z);
double schwarz_residual(const std::function<cplx(cplx)>& lambda, cplx z, double h);
/// Triplet built from a Schwarz solution and its numerical derivative.
ModularTriplet triplet_from_lambda(const std::function<cplx(cplx)>& lambda, cplx z, double h);

ChazyData chazy_from_dh(const TriAxial& state);
double chazy_residual(const std::function<cplx(cplx)>& y, cplx z, double h);
/// Roots of w^3 + y/2 w^2 + y'/2 w + y''/12, ordered to match the given triple.
CVec3 chazy_cubic_roots(const ChazyData& data, const CVec3& reference);

Vec3 reflection_check(double T);

/// Fourth-order central-difference derivatives of a holomorphic function along the real direction.
cplx diff1(const std::function<cplx(cplx)>& f, cplx z, double h);
cplx diff2(const std::function<cplx(cplx)>& f, cplx z, double h);
cplx diff3(const std::function<cplx(cplx)>& f, cplx z, double h);

} // namespace hl

#endif
