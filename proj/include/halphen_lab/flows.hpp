#ifndef HALPHEN_LAB_FLOWS_HPP
#define HALPHEN_LAB_FLOWS_HPP

#include <vector>

#include "halphen_lab/halphen.hpp"

namespace hl {

/// Ricci flow dg/dt = -Ric on the Bianchi IX sphere
/// g = sum_i I_i (sigma^i)^2, I_i = sqrt(Omega^j Omega^k / Omega^i),
/// with flow time dt = sqrt(Omega1 Omega2 Omega3) dT.
struct FlowRun {
    Trajectory traj;
    std::vector<double> t;      // flow time, from the first sample
    std::vector<double> volume; // 16 pi^2 (Omega1 Omega2 Omega3)^{1/4}
    std::vector<Vec3> ratios;   // Omega1/Omega2, Omega2/Omega3, Omega3/Omega1
    bool stayed_positive = true;
};

FlowRun flow_run(const RealTriAxial& init, double T_end, double tol, bool require_positive = true);

/// Metric coefficients I_i of the flowing three-metric.
Vec3 flow_metric(const Vec3& Omega);
/// Ricci components R_ii of the three-metric in the sigma basis.
Vec3 flow_ricci(const Vec3& Omega);
double flow_scalar_curvature(const Vec3& Omega);
double flow_volume(const Vec3& Omega);

/// State at T by cubic Hermite interpolation of the samples.
Vec3 interpolate_state(const FlowRun& run, double T);

double isotropy_ratio(const FlowRun& run, double T);

struct VolumeRate {
    double numeric = 0.0; // dV/dt by central differences of re-integrated states
    double formula = 0.0; // -1/2 V R
    double residual = 0.0;
};

VolumeRate volume_rate_check(const FlowRun& run, double T);

} // namespace hl

#endif
