#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "halphen_lab/flows.hpp"

using namespace hl;
using doctest::Approx;

namespace {

using Mat3d = Eigen::Matrix3d;

// Left-invariant forms on S^3 in Euler angles x = (theta, phi, psi); row i holds sigma^i.
Mat3d euler_forms(const Eigen::Vector3d& x)
{
    double th = x[0], ps = x[2];
    Mat3d s;
    s << std::sin(ps), -std::sin(th) * std::cos(ps), 0.0,
         std::cos(ps), std::sin(th) * std::sin(ps), 0.0,
         0.0, std::cos(th), 1.0;
    return s;
}

Mat3d coordinate_metric(const Vec3& I, const Eigen::Vector3d& x)
{
    Mat3d s = euler_forms(x);
    return s.transpose() * Eigen::Vector3d(I[0], I[1], I[2]).asDiagonal() * s;
}

// Scalar curvature from Christoffel symbols, all derivatives by fourth-order differences.
double fd_scalar_curvature(const Vec3& I, const Eigen::Vector3d& x)
{
    auto d = [](auto f, const Eigen::Vector3d& p, int a, double h) {
        Eigen::Vector3d e = Eigen::Vector3d::Unit(a) * h;
        return (-f(p + 2 * e) + 8.0 * f(p + e) - 8.0 * f(p - e) + f(p - 2 * e)) / (12.0 * h);
    };
    auto christoffel = [&](const Eigen::Vector3d& p) {
        const double h = 1e-4;
        std::array<Mat3d, 3> dg;
        auto g = [&](const Eigen::Vector3d& q) { return coordinate_metric(I, q); };
        for (int a = 0; a < 3; ++a)
            dg[a] = d([&](const Eigen::Vector3d& q) -> Mat3d { return g(q); }, p, a, h);
        Mat3d ginv = g(p).inverse();
        std::array<Mat3d, 3> G; // G[k](i,j) = Gamma^k_ij
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double v = 0.0;
                    for (int l = 0; l < 3; ++l)
                        v += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                    G[k](i, j) = v;
                }
        return G;
    };
    const double h = 1e-3;
    auto G = christoffel(x);
    std::array<std::array<Mat3d, 3>, 3> dG; // dG[a][k](i,j) = d_a Gamma^k_ij
    for (int a = 0; a < 3; ++a) {
        Eigen::Vector3d e = Eigen::Vector3d::Unit(a) * h;
        auto p2 = christoffel(x + 2 * e), p1 = christoffel(x + e), m1 = christoffel(x - e), m2 = christoffel(x - 2 * e);
        for (int k = 0; k < 3; ++k)
            dG[a][k] = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
    }
    Mat3d ric = Mat3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            for (int k = 0; k < 3; ++k) {
                v += dG[k][k](i, j) - dG[j][k](i, k);
                for (int l = 0; l < 3; ++l)
                    v += G[k](k, l) * G[l](i, j) - G[k](j, l) * G[l](i, k);
            }
            ric(i, j) = v;
        }
    return (coordinate_metric(I, x).inverse() * ric).trace();
}

} // namespace

TEST_CASE("three-metric scalar curvature against a coordinate computation")
{
    Eigen::Vector3d x(1.1, 0.4, 0.7);
    CHECK(flow_scalar_curvature({1.0, 1.0, 1.0}) == Approx(1.5).epsilon(1e-14));
    CHECK(fd_scalar_curvature({1.0, 1.0, 1.0}, x) == Approx(1.5).epsilon(1e-6));
    for (Vec3 W : {Vec3{1.0, 2.0, 3.0}, Vec3{0.3, 2.5, 1.1}, Vec3{4.0, 0.2, 0.9}}) {
        Vec3 I = flow_metric(W);
        CHECK(fd_scalar_curvature(I, x) == Approx(flow_scalar_curvature(W)).epsilon(1e-6));
    }
}

TEST_CASE("flow metric helpers")
{
    Vec3 W{1.0, 2.0, 3.0};
    Vec3 I = flow_metric(W);
    CHECK(I[0] == Approx(std::sqrt(6.0)).epsilon(1e-15));
    CHECK(I[1] == Approx(std::sqrt(1.5)).epsilon(1e-15));
    CHECK(flow_volume(W) == Approx(16.0 * pi * pi * std::pow(6.0, 0.25)).epsilon(1e-15));
    CHECK(flow_volume({2.0, 4.0, 6.0}) == Approx(std::pow(2.0, 0.75) * flow_volume(W)).epsilon(1e-14));
}

TEST_CASE("trapping and late-time law for a generic start")
{
    auto run = flow_run({{1.0, 2.0, 3.0}, 1.0}, 50.0, 1e-10);
    CHECK(run.stayed_positive);
    for (const auto& s : run.traj.samples)
        for (double w : s.Omega)
            CHECK(w > 0.0);
    for (double w : run.traj.samples.back().Omega)
        CHECK(std::abs(50.0 * w - 1.0) < 0.05);
    for (std::size_t i = 1; i < run.t.size(); ++i)
        CHECK(run.t[i] > run.t[i - 1]);
}

TEST_CASE("isotropic start")
{
    auto run = flow_run({{0.5, 0.5, 0.5}, 1.0}, 20.0, 1e-12);
    for (const auto& s : run.traj.samples)
        for (double w : s.Omega)
            CHECK(w == Approx(1.0 / (s.T + 1.0)).epsilon(1e-9));
    CHECK(isotropy_ratio(run, 7.3) < 1e-12);
    auto rate = volume_rate_check(run, 5.0);
    CHECK(rate.numeric < 0.0);
    CHECK(rate.residual < 1e-6);
}

TEST_CASE("isotropy ratio")
{
    auto run = flow_run({{1.0, 2.0, 3.0}, 1.0}, 50.0, 1e-10);
    CHECK(isotropy_ratio(run, 50.0) < 0.1);
    CHECK_THROWS_AS(isotropy_ratio(run, 60.0), Error);
    try {
        isotropy_ratio(run, 0.5);
        FAIL("expected OutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }

    auto biaxial = flow_run({{1.0, 1.0, 5.0}, 1.0}, 40.0, 1e-11);
    double prev = INFINITY;
    for (double T = 2.0; T <= 40.0; T += 2.0) {
        Vec3 W = interpolate_state(biaxial, T);
        CHECK(std::abs(W[0] - W[1]) < 1e-9);
        double r = isotropy_ratio(biaxial, T);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("volume decay rate")
{
    auto run = flow_run({{1.0, 2.0, 3.0}, 1.0}, 50.0, 1e-10);
    auto rate = volume_rate_check(run, 5.0);
    CHECK(rate.residual < 1e-3);
    CHECK(rate.numeric < 0.0);
    CHECK(rate.formula == Approx(rate.numeric).epsilon(1e-3));

    auto scaled = flow_run({{2.0, 4.0, 6.0}, 1.0}, 50.0, 1e-10);
    CHECK(volume_rate_check(scaled, 5.0).residual < 1e-3);
    CHECK_THROWS_AS(volume_rate_check(run, 50.0), Error);
}

TEST_CASE("flow_run rejects non-positive starts")
{
    try {
        flow_run({{-1.0, 1.0, 1.0}, 0.0}, 1.0, 1e-8);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("positivity trapping for random starts")
{
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int k = 0; k < 20; ++k) {
        auto run = flow_run({{u(rng), u(rng), u(rng)}, 0.0}, 50.0, 1e-9);
        CHECK(run.stayed_positive);
        CHECK(run.traj.reason == Termination::Completed);
    }
}

TEST_CASE("a negative component recovers")
{
    auto run = flow_run({{-0.5, 1.0, 2.0}, 0.0}, 50.0, 1e-10, false);
    CHECK(!run.stayed_positive);
    REQUIRE(run.traj.root_times.size() == 1);
    double T1 = run.traj.root_times[0];
    CHECK(T1 > 0.0);
    for (const auto& s : run.traj.samples)
        if (s.T > T1 + 1e-6)
            for (double w : s.Omega)
                CHECK(w > 0.0);
}
