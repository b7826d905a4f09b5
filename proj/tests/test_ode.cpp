#include <doctest.h>

#include <cmath>

#include "halphen_lab/error.hpp"
#include "halphen_lab/ode.hpp"
#include "halphen_lab/types.hpp"

using namespace hl;
using doctest::Approx;

TEST_CASE("exponential decay")
{
    OdeRhs rhs = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = -y[0]; };
    OdeOptions opts;
    opts.tol = 1e-11;
    auto r = integrate_ode(rhs, 0.0, {1.0}, 5.0, opts);
    REQUIRE(r.reason == Termination::Completed);
    CHECK(r.t.back() == 5.0);
    CHECK(r.y.back()[0] == Approx(std::exp(-5.0)).epsilon(1e-9));
    for (std::size_t i = 1; i < r.t.size(); ++i)
        CHECK(r.t[i] > r.t[i - 1]);
    CHECK(r.accepted == r.t.size() - 1);
}

TEST_CASE("backward integration of a harmonic oscillator")
{
    OdeRhs rhs = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    OdeOptions opts;
    opts.tol = 1e-12;
    auto r = integrate_ode(rhs, 0.0, {0.0, 1.0}, -3.0, opts);
    CHECK(r.y.back()[0] == Approx(std::sin(-3.0)).epsilon(1e-9));
    CHECK(r.y.back()[1] == Approx(std::cos(-3.0)).epsilon(1e-9));
}

TEST_CASE("blowup of y' = y^2")
{
    OdeRhs rhs = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0] * y[0]; };
    OdeOptions opts;
    opts.tol = 1e-8;
    opts.watched = {0};
    auto r = integrate_ode(rhs, 0.0, {1.0}, 2.0, opts);
    CHECK(r.reason == Termination::Blowup);
    CHECK(std::abs(r.y.back()[0]) > 1e8);
    CHECK(r.t.back() == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("root crossing located by bisection")
{
    OdeRhs rhs = [](double t, const std::vector<double>&, std::vector<double>& d) { d[0] = -std::sin(t); };
    OdeOptions opts;
    opts.tol = 1e-11;
    opts.watched = {0};
    auto r = integrate_ode(rhs, 0.0, {1.0}, 4.0, opts);
    REQUIRE(r.reason == Termination::RootCrossing);
    REQUIRE(r.root_times.size() == 1);
    CHECK(std::abs(r.root_times[0] - pi / 2.0) < 1e-9);
    CHECK(r.root_components[0] == 0);

    opts.stop_on_root = false;
    auto all = integrate_ode(rhs, 0.0, {1.0}, 8.0, opts);
    CHECK(all.reason == Termination::Completed);
    REQUIRE(all.root_times.size() == 3);
    CHECK(std::abs(all.root_times[1] - 1.5 * pi) < 1e-9);
    CHECK(std::abs(all.root_times[2] - 2.5 * pi) < 1e-9);
}

TEST_CASE("integrator argument validation")
{
    OdeRhs rhs = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0]; };
    OdeOptions bad;
    bad.tol = -1.0;
    CHECK_THROWS_AS(integrate_ode(rhs, 0.0, {1.0}, 1.0, bad), Error);
    CHECK_THROWS_AS(integrate_ode(rhs, 1.0, {1.0}, 1.0, OdeOptions{}), Error);
}

TEST_CASE("termination names")
{
    CHECK(std::string(termination_name(Termination::Completed)) == "completed");
    CHECK(std::string(termination_name(Termination::Blowup)) == "blowup");
    CHECK(std::string(termination_name(Termination::RootCrossing)) == "root_crossing");
}
