#include <doctest.h>

#include <cmath>
#include <numbers>

#include "halphen_lab/special.hpp"

using namespace hl;
using doctest::Approx;

TEST_CASE("zeta at even integers and in the critical strip")
{
    CHECK(zeta(2.0) == Approx(pi * pi / 6.0).epsilon(1e-14));
    CHECK(zeta(4.0) == Approx(std::pow(pi, 4) / 90.0).epsilon(1e-14));
    CHECK(zeta(3.0) == Approx(1.20205690315959428540).epsilon(1e-14));
    // reference values from a 30-digit evaluation
    CHECK(zeta(0.5) == Approx(-1.46035450880958681289).epsilon(1e-12));
    CHECK(zeta(-2.5) == Approx(0.00851692877785033054).epsilon(1e-10));
    CHECK(std::abs(zeta(-2.0)) < 1e-15);
    CHECK(zeta(-1.0) == Approx(-1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("completed zeta values and reflection")
{
    CHECK(completed_zeta(2.0) == Approx(pi / 6.0).epsilon(1e-13));
    CHECK(completed_zeta(4.0) == Approx(pi * pi / 90.0).epsilon(1e-13));
    CHECK(completed_zeta(3.0) == Approx(completed_zeta(-2.0)).epsilon(1e-12));
    CHECK(completed_zeta(2.5) == Approx(completed_zeta(-1.5)).epsilon(1e-12));
    CHECK(completed_zeta(0.3) == Approx(completed_zeta(0.7)).epsilon(1e-11));
}

TEST_CASE("completed zeta rejects its poles")
{
    for (double s : {0.0, 1.0}) {
        try {
            completed_zeta(s);
            FAIL("expected PoleAtS");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::PoleAtS);
        }
    }
}

TEST_CASE("bessel K at half-integer order is the closed form")
{
    for (double x : {0.5, 2.0, 10.0}) {
        double exact = std::sqrt(pi / (2.0 * x)) * std::exp(-x);
        CHECK(std::abs(bessel_k(0.5, x) - exact) < 1e-12 * std::max(1.0, exact));
        CHECK(bessel_k(1.5, x) == Approx(exact * (1.0 + 1.0 / x)).epsilon(1e-13));
    }
    CHECK(bessel_k(2.5, 0.7) == Approx(8.48634159280138499814).epsilon(1e-13));
    CHECK(bessel_k(1.5, 4.0 * pi) == Approx(1.33107768992599928680e-6).epsilon(1e-12));
}

TEST_CASE("bessel K at general order against the standard library")
{
    for (double nu : {0.0, 0.3, 1.0, 2.2, 4.7})
        for (double x : {0.05, 0.4, 1.7, 6.0, 25.0})
            CHECK(bessel_k(nu, x) == Approx(std::cyl_bessel_k(nu, x)).epsilon(1e-10));
    CHECK(bessel_k(0.3, 1.7) == Approx(0.169073052272134391273).epsilon(1e-12));
    CHECK(bessel_k(-0.3, 1.7) == bessel_k(0.3, 1.7));
}

TEST_CASE("bessel K rejects non-positive arguments")
{
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), Error);
    CHECK_THROWS_AS(bessel_k(1.0, -2.0), Error);
}

TEST_CASE("divisor sums")
{
    CHECK(divisor_sigma(3.0, 1) == 1.0);
    CHECK(divisor_sigma(1.0, 6) == 12.0);
    CHECK(divisor_sigma(3.0, 4) == 73.0);
    CHECK(divisor_sigma(0.0, 36) == 9.0);
    for (std::int64_t n = 1; n < 200; ++n) {
        double brute = 0.0;
        for (std::int64_t d = 1; d <= n; ++d)
            if (n % d == 0)
                brute += std::pow(double(d), 1.5);
        CHECK(divisor_sigma(1.5, n) == Approx(brute).epsilon(1e-13));
    }
}

TEST_CASE("compensated and pairwise sums")
{
    CompensatedSum<double> acc;
    acc.add(1.0);
    for (int i = 0; i < 1000; ++i)
        acc.add(1e-16);
    acc.add(-1.0);
    CHECK(acc.value() == Approx(1e-13).epsilon(1e-6));
    CHECK(pairwise_sum({1.0, 2.0, 3.0, 4.0, 5.0}) == 15.0);
    CHECK(pairwise_sum({}) == 0.0);
}
