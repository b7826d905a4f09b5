#ifndef HALPHEN_LAB_GEOMETRY_HPP
#define HALPHEN_LAB_GEOMETRY_HPP

#include <Eigen/Core>

#include "halphen_lab/halphen.hpp"

namespace hl {

using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Coefficients of Sigma_i and A_i along the frame one-form theta^i.
struct ConnectionCoeffs {
    Vec3 sigma{};
    Vec3 a{};
};

ConnectionCoeffs connection(const RealTriAxial& state, const Vec3& Omega_dot);

struct CurvatureDecomp {
    Mat3 Wplus = Mat3::Zero();
    Mat3 Wminus = Mat3::Zero();
    Mat3 Cplus = Mat3::Zero();
    // Tr r, equal to half the four-dimensional scalar curvature.
    double s = 0.0;
    // ||C+ - (C-)^t|| as computed independently from S_i and A_i.
    double cross_asymmetry = 0.0;

    Mat3 Cminus() const { return Cplus.transpose(); }
    /// Traceless Ricci tensor S_ab rebuilt from C^+ and C^-.
    Mat4 traceless_ricci() const;
    /// Frobenius norm of the whole 6x6 matrix r.
    double riemann_norm() const;
};

/// Curvature of ds^2 = |O1 O2 O3| dT^2 + sum |Oj Ok / Oi| (sigma^i)^2. When
/// O1 O2 O3 < 0 the metric is the negative of this one, which has the same
/// Levi-Civita connection and curvature two-forms; the frame orientation is
/// then reversed (theta^0 = -sqrt|O1 O2 O3| dT).
CurvatureDecomp curvature_decomp(const RealTriAxial& state, const Vec3& Omega_dot, const Vec3& Omega_ddot);

/// Convenience: curvature along a system, with derivatives from its RHS.
CurvatureDecomp curvature_on_system(System sys, const RealTriAxial& state);

struct GeometryFlags {
    bool einstein = false;
    bool ricci_flat = false;
    bool self_dual = false;
    bool anti_self_dual = false;
    bool conformally_self_dual = false;
    bool conformally_anti_self_dual = false;
    bool conformally_flat = false;
};

GeometryFlags classify_geometry(const CurvatureDecomp& dec, double tol);

struct WeylPart {
    Mat3 W = Mat3::Zero();
    double scalar = 0.0;
    Mat3 C = Mat3::Zero();
    double norm() const { return W.norm() + std::abs(scalar) + C.norm(); }
};

struct OnShellWeyl {
    WeylPart plus;
    WeylPart minus;
    bool quaternionic(double tol) const { return minus.norm() < tol; }
};

OnShellWeyl onshell_weyl(const CurvatureDecomp& dec, double Lambda);

enum class EndpointKind { Nut, Bolt, TaubianInfinity, CurvatureSingularity, Undetermined };

const char* endpoint_kind_name(EndpointKind k) noexcept;

struct EndpointClass {
    EndpointKind kind = EndpointKind::Undetermined;
    double n = 0.0;
    double zeta = 0.0;
    double fit_quality = 0.0;
    // Fitted exponents of the three frame coefficients against proper time.
    Vec3 exponents{};
};

enum class EndpointSide { Lower, Upper };

EndpointClass classify_endpoint(const Trajectory& traj, EndpointSide end);

/// Taub-NUT with parameter m at radius r, evaluated through the two-equal
/// Darboux-Halphen solution (T0 = 0, T* = -1/m^2).
CurvatureDecomp taub_nut_check(double m, double r);

/// Ricci tensor contracted directly from the frame Riemann tensor.
Mat4 ricci_from_frame(const RealTriAxial& state, const Vec3& Omega_dot, const Vec3& Omega_ddot);

/// Ricci-flat checks use ||W-|| + ||C+|| + |s| against 1 + ||W+||.
double self_duality_defect(const CurvatureDecomp& dec);
double anti_self_duality_defect(const CurvatureDecomp& dec);

} // namespace hl

#endif
