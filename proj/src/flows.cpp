#include "halphen_lab/flows.hpp"

#include <algorithm>
#include <cmath>

namespace hl {

Vec3 flow_metric(const Vec3& W)
{
    return {std::sqrt(W[1] * W[2] / W[0]), std::sqrt(W[2] * W[0] / W[1]), std::sqrt(W[0] * W[1] / W[2])};
}

Vec3 flow_ricci(const Vec3& W)
{
    Vec3 I = flow_metric(W);
    Vec3 R{};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        R[i] = (I[i] * I[i] - (I[j] - I[k]) * (I[j] - I[k])) / (2.0 * I[j] * I[k]);
    }
    return R;
}

double flow_scalar_curvature(const Vec3& W)
{
    Vec3 I = flow_metric(W);
    Vec3 R = flow_ricci(W);
    return R[0] / I[0] + R[1] / I[1] + R[2] / I[2];
}

double flow_volume(const Vec3& W) { return 16.0 * pi * pi * std::pow(W[0] * W[1] * W[2], 0.25); }

FlowRun flow_run(const RealTriAxial& init, double T_end, double tol, bool require_positive)
{
    if (require_positive)
        for (double w : init.Omega)
            if (!(w > 0.0) || !std::isfinite(w))
                fail(ErrorCode::DomainError, "flow_run: initial Omega must be positive and finite");
    FlowRun run;
    run.traj = integrate(System::DarbouxHalphen, init, T_end, tol, false);
    for (const auto& s : run.traj.samples) {
        run.t.push_back(s.tau);
        bool positive = s.Omega[0] > 0.0 && s.Omega[1] > 0.0 && s.Omega[2] > 0.0;
        run.stayed_positive = run.stayed_positive && positive;
        run.volume.push_back(positive ? flow_volume(s.Omega) : NAN);
        run.ratios.push_back({s.Omega[0] / s.Omega[1], s.Omega[1] / s.Omega[2], s.Omega[2] / s.Omega[0]});
    }
    run.stayed_positive = run.stayed_positive && run.traj.root_times.empty();
    return run;
}

namespace {

std::size_t bracket(const Trajectory& traj, double T)
{
    const auto& s = traj.samples;
    const double lo = std::min(s.front().T, s.back().T);
    const double hi = std::max(s.front().T, s.back().T);
    if (!(T >= lo && T <= hi))
        fail(ErrorCode::OutOfRange, "T lies outside the run");
    const bool inc = s.back().T > s.front().T;
    auto it = std::lower_bound(s.begin(), s.end(), T, [inc](const TrajectorySample& a, double v) {
        return inc ? a.T < v : a.T > v;
    });
    std::size_t i = std::size_t(it - s.begin());
    return std::clamp<std::size_t>(i, 1, s.size() - 1);
}

} // namespace

Vec3 interpolate_state(const FlowRun& run, double T)
{
    const auto& s = run.traj.samples;
    std::size_t i = bracket(run.traj, T);
    const auto& a = s[i - 1];
    const auto& b = s[i];
    const double h = b.T - a.T;
    const double u = (T - a.T) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    Vec3 out{};
    for (int c = 0; c < 3; ++c)
        out[c] = h00 * a.Omega[c] + h10 * h * a.Omega_dot[c] + h01 * b.Omega[c] + h11 * h * b.Omega_dot[c];
    return out;
}

double isotropy_ratio(const FlowRun& run, double T)
{
    Vec3 W = interpolate_state(run, T);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j)
                worst = std::max(worst, std::abs(W[i] / W[j] - 1.0));
    return worst;
}

VolumeRate volume_rate_check(const FlowRun& run, double T)
{
    const auto& s = run.traj.samples;
    std::size_t i = bracket(run.traj, T);
    const double h = 1e-3 * std::max(std::abs(T), 1e-3);
    const double lo = std::min(s.front().T, s.back().T);
    const double hi = std::max(s.front().T, s.back().T);
    if (T - 2 * h < lo || T + 2 * h > hi)
        fail(ErrorCode::OutOfRange, "volume_rate_check: T too close to the ends of the run");

    const auto& start = s[i - 1];
    const double tol = std::min(run.traj.tol, 1e-12);
    auto state_at = [&](double Tq) {
        if (Tq == start.T)
            return start.Omega;
        return integrate(System::DarbouxHalphen, {start.Omega, start.T}, Tq, tol, false).samples.back().Omega;
    };
    Vec3 W0 = state_at(T);
    double V[4];
    const double offs[4] = {-2 * h, -h, h, 2 * h};
    for (int k = 0; k < 4; ++k)
        V[k] = flow_volume(state_at(T + offs[k]));
    double dVdT = (V[0] - 8 * V[1] + 8 * V[2] - V[3]) / (12 * h);
    double dtdT = std::sqrt(W0[0] * W0[1] * W0[2]);

    VolumeRate out;
    out.numeric = dVdT / dtdT;
    out.formula = -0.5 * flow_volume(W0) * flow_scalar_curvature(W0);
    out.residual = std::abs(out.numeric - out.formula) / std::abs(out.formula);
    return out;
}

} // namespace hl
