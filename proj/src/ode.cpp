#include "halphen_lab/ode.hpp"

#include <algorithm>
#include <cmath>

#include "halphen_lab/error.hpp"

namespace hl {

const char* termination_name(Termination t) noexcept
{
    switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Blowup: return "blowup";
    case Termination::RootCrossing: return "root_crossing";
    }
    return "unknown";
}

namespace {

using Vec = std::vector<double>;

struct Dopri5 {
    const OdeRhs& rhs;
    std::size_t n;
    Vec k2, k3, k4, k5, k6, tmp;

    Dopri5(const OdeRhs& f, std::size_t dim) : rhs(f), n(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), tmp(dim) {}

    // One step of size h from (t, y) with k1 = f(t, y). Fills y_new, the
    // embedded error estimate and k7 = f(t + h, y_new).
    void step(double t, const Vec& y, const Vec& k1, double h, Vec& y_new, Vec& err, Vec& k7)
    {
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + h / 5, tmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + 3 * h / 10, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + 4 * h / 5, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + 8 * h / 9, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, y_new, k7);
        for (std::size_t i = 0; i < n; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
};

bool all_finite(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double error_norm(const Vec& err, const Vec& y, const Vec& y_new, double tol)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        worst = std::max(worst, std::abs(err[i]) / sc);
    }
    return worst;
}

bool sign_changed(double before, double after) { return before != 0.0 && (after == 0.0 || (before > 0.0) != (after > 0.0)); }

} // namespace

OdeResult integrate_ode(const OdeRhs& rhs, double t0, const std::vector<double>& y0, double t1,
                        const OdeOptions& opts)
{
    require(opts.tol > 0.0 && std::isfinite(opts.tol), ErrorCode::InvalidArgument, "integrate: tol must be > 0");
    require(t1 != t0 && std::isfinite(t0) && std::isfinite(t1), ErrorCode::InvalidArgument,
            "integrate: T_end must differ from the initial time");
    require(all_finite(y0), ErrorCode::InvalidArgument, "integrate: initial state must be finite");
    const std::size_t n = y0.size();
    for (std::size_t w : opts.watched)
        require(w < n, ErrorCode::InvalidArgument, "integrate: watched component out of range");

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double tol = opts.tol;
    Dopri5 stepper(rhs, n);

    OdeResult out;
    double t = t0;
    Vec y = y0, k1(n), y_new(n), err(n), k7(n);
    rhs(t, y, k1);
    out.t.push_back(t);
    out.y.push_back(y);

    // Initial step from the scale of y and y'.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = tol + tol * std::abs(y[i]);
        d0 = std::max(d0, std::abs(y[i]) / sc);
        d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, std::abs(t1 - t0)) * dir;

    while (dir * (t1 - t) > 0.0) {
        if (out.accepted + out.rejected >= opts.max_steps)
            fail(ErrorCode::NotConverged, "integrate: step budget exhausted");
        if (dir * (t + h - t1) > 0.0)
            h = t1 - t;
        if (std::abs(h) < 1e-14 * std::max(std::abs(t), 1.0))
            fail(ErrorCode::StepUnderflow, "integrate: step size underflow");

        stepper.step(t, y, k1, h, y_new, err, k7);
        double en = all_finite(y_new) && all_finite(err) ? error_norm(err, y, y_new, tol) : 1e10;
        if (en > 1.0) {
            ++out.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            continue;
        }
        ++out.accepted;

        // Earliest sign change among watched components inside this step.
        double root_h = 0.0;
        std::size_t root_comp = n;
        for (std::size_t w : opts.watched) {
            if (!sign_changed(y[w], y_new[w]))
                continue;
            double lo = 0.0, hi = h;
            Vec ym(n), em(n), km(n);
            while (std::abs(hi - lo) > 1e-10) {
                double mid = 0.5 * (lo + hi);
                stepper.step(t, y, k1, mid, ym, em, km);
                if (sign_changed(y[w], ym[w]))
                    hi = mid;
                else
                    lo = mid;
            }
            if (root_comp == n || std::abs(lo) < std::abs(root_h)) {
                root_h = lo;
                root_comp = w;
            }
        }
        if (root_comp != n) {
            out.root_times.push_back(t + root_h);
            out.root_components.push_back(root_comp);
            if (opts.stop_on_root) {
                if (root_h != 0.0) {
                    stepper.step(t, y, k1, root_h, y_new, err, k7);
                    out.t.push_back(t + root_h);
                    out.y.push_back(y_new);
                }
                out.reason = Termination::RootCrossing;
                return out;
            }
        }

        t += h;
        y.swap(y_new);
        k1.swap(k7);
        out.t.push_back(t);
        out.y.push_back(y);

        for (std::size_t w : opts.watched) {
            if (std::abs(y[w]) > 1.0 / tol) {
                out.reason = Termination::Blowup;
                return out;
            }
        }
        double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h *= grow;
    }
    return out;
}

} // namespace hl
