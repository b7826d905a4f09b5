#ifndef HALPHEN_LAB_ODE_HPP
#define HALPHEN_LAB_ODE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace hl {

enum class Termination { Completed, Blowup, RootCrossing };

const char* termination_name(Termination t) noexcept;

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

struct OdeOptions {
    double tol = 1e-10;
    // Components watched for sign changes and for blowup.
    std::vector<std::size_t> watched;
    bool stop_on_root = true;
    std::size_t max_steps = 5'000'000;
};

struct OdeResult {
    std::vector<double> t;
    std::vector<std::vector<double>> y;
    Termination reason = Termination::Completed;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    // Located sign changes of watched components, in integration order.
    std::vector<double> root_times;
    std::vector<std::size_t> root_components;
};

/// Dormand-Prince 5(4) with embedded error control (atol = rtol = tol).
/// Every accepted step is recorded. Stops with Blowup once a watched
/// component exceeds 1/tol in magnitude.
OdeResult integrate_ode(const OdeRhs& rhs, double t0, const std::vector<double>& y0, double t1,
                        const OdeOptions& opts);

} // namespace hl

#endif
