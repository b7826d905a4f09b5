#include <doctest.h>

#include <cmath>
#include <random>

#include "halphen_lab/geometry.hpp"

using namespace hl;
using doctest::Approx;

namespace {

RealTriAxial two_equal(double T, double T0, double Ts)
{
    double d = T - T0;
    return {{1.0 / d, 1.0 / d, (T - Ts) / (d * d)}, T};
}

double zero_part(const CurvatureDecomp& d) { return d.Wminus.norm() + d.Cplus.norm() + std::abs(d.s); }

} // namespace

TEST_CASE("connection on the two branches")
{
    RealTriAxial p{{1.0, 2.0, 3.0}, 1.0};
    double root = std::sqrt(6.0);
    auto dh = connection(p, system_rhs(System::DarbouxHalphen, p.Omega));
    for (int i = 0; i < 3; ++i)
        CHECK(dh.a[i] == Approx(p.Omega[i] / (2.0 * root)).epsilon(1e-14));
    auto lag = connection(p, system_rhs(System::Lagrange, p.Omega));
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(lag.a[i]) < 1e-15);

    auto iso = connection({{0.7, 0.7, 0.7}, 1.0}, {0.0, 0.0, 0.0});
    CHECK(iso.sigma[0] == Approx(iso.sigma[1]));
    CHECK(iso.sigma[1] == Approx(iso.sigma[2]));

    for (Vec3 bad : {Vec3{0.0, 1.0, 1.0}, Vec3{-1.0, 1.0, 1.0}}) {
        try {
            connection({bad, 1.0}, {0.0, 0.0, 0.0});
            FAIL("expected DegenerateMetric");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateMetric);
        }
    }
}

TEST_CASE("self-duality on both branches")
{
    for (System sys : {System::DarbouxHalphen, System::Lagrange})
        for (Vec3 W : {Vec3{1.0, 2.0, 3.0}, Vec3{0.4, 1.7, 0.9}, Vec3{-0.5, 1.0, 2.0}}) {
            auto d = curvature_on_system(sys, {W, 1.0});
            CHECK(zero_part(d) < 1e-9 * (1.0 + d.Wplus.norm()));
            CHECK(d.Wplus.norm() > 1e-3);
            auto f = classify_geometry(d, 1e-9 * (1.0 + d.Wplus.norm()));
            CHECK(f.self_dual);
            CHECK(f.einstein);
            CHECK(f.conformally_self_dual);
            CHECK(!f.anti_self_dual);
        }
    auto h = curvature_on_system(System::DarbouxHalphen, halphen_closed_form_real(1.3));
    CHECK(self_duality_defect(h) < 1e-9);
}

TEST_CASE("isotropic solution is flat")
{
    for (double T : {0.5, 2.0, 7.0}) {
        auto d = curvature_on_system(System::DarbouxHalphen, {{1.0 / T, 1.0 / T, 1.0 / T}, T});
        CHECK(d.riemann_norm() < 1e-9);
        auto f = classify_geometry(d, 1e-9);
        CHECK(f.conformally_flat);
        CHECK(f.ricci_flat);
    }
}

TEST_CASE("time reversal swaps self-dual and anti-self-dual")
{
    Vec3 W{1.0, 2.0, 3.0};
    Vec3 f = system_rhs(System::DarbouxHalphen, W);
    Vec3 g = system_second_derivative(System::DarbouxHalphen, W);
    auto d = curvature_decomp({W, -1.0}, {-f[0], -f[1], -f[2]}, g);
    CHECK(anti_self_duality_defect(d) < 1e-9);
    CHECK(d.Wminus.norm() > 1e-3);
}

TEST_CASE("decomposition invariants at a generic point")
{
    RealTriAxial q{{0.7, 1.3, 2.1}, 0.0};
    Vec3 qd{0.3, 0.5, -0.8}, qdd{1.1, -0.4, 0.2};
    auto d = curvature_decomp(q, qd, qdd);
    CHECK(std::abs(d.Wplus.trace()) < 1e-12);
    CHECK(std::abs(d.Wminus.trace()) < 1e-12);
    CHECK((d.Wplus - d.Wplus.transpose()).norm() < 1e-12);
    CHECK((d.Wminus - d.Wminus.transpose()).norm() < 1e-12);
    CHECK(d.cross_asymmetry < 1e-12);

    Mat4 Ric = ricci_from_frame(q, qd, qdd);
    double R = Ric.trace();
    CHECK(d.s == Approx(R / 2.0).epsilon(1e-10));
    Mat4 S = Ric - R / 4.0 * Mat4::Identity();
    CHECK((S - d.traceless_ricci()).norm() < 1e-10 * (1.0 + S.norm()));

    // negative product: same curvature up to orientation, still finite
    auto neg = curvature_decomp({{0.7, -1.3, 2.1}, 0.0}, qd, qdd);
    CHECK(std::isfinite(neg.riemann_norm()));
    CHECK_THROWS_AS(curvature_decomp({{0.0, 1.0, 1.0}, 0.0}, qd, qdd), Error);
}

TEST_CASE("finite-difference second derivatives keep the classification")
{
    auto tr = integrate(System::DarbouxHalphen, {{1.0, 2.0, 3.0}, 1.0}, 3.0, 1e-12);
    const double h = 1e-2;
    for (double T : {1.5, 2.0, 2.5}) {
        auto at = [&](double t) { return integrate(System::DarbouxHalphen, {{1.0, 2.0, 3.0}, 1.0}, t, 1e-13).samples.back().Omega; };
        Vec3 W = at(T), Wp = at(T + h), Wm = at(T - h), Wpp = at(T + 2 * h), Wmm = at(T - 2 * h);
        Vec3 Wdd;
        for (int i = 0; i < 3; ++i)
            Wdd[i] = (-Wpp[i] + 16.0 * Wp[i] - 30.0 * W[i] + 16.0 * Wm[i] - Wmm[i]) / (12.0 * h * h);
        auto d = curvature_decomp({W, T}, system_rhs(System::DarbouxHalphen, W), Wdd);
        auto f = classify_geometry(d, 1e-6);
        CHECK(f.self_dual);
        CHECK(!f.anti_self_dual);
    }
    CHECK(tr.samples.size() > 2);
}

TEST_CASE("classification of synthetic decompositions")
{
    CurvatureDecomp zero;
    auto f = classify_geometry(zero, 1e-12);
    CHECK(f.einstein);
    CHECK(f.ricci_flat);
    CHECK(f.self_dual);
    CHECK(f.anti_self_dual);
    CHECK(f.conformally_flat);

    CurvatureDecomp einstein;
    einstein.s = 0.8;
    auto g = classify_geometry(einstein, 1e-12);
    CHECK(g.einstein);
    CHECK(!g.self_dual);
    CHECK(!g.ricci_flat);
    CHECK(g.conformally_flat);
}

TEST_CASE("on-shell Weyl tensor")
{
    auto dh = curvature_on_system(System::DarbouxHalphen, {{1.0, 2.0, 3.0}, 1.0});
    auto w = onshell_weyl(dh, 0.0);
    CHECK(w.minus.norm() < 1e-9);
    CHECK(w.quaternionic(1e-9));
    CHECK((w.plus.W - dh.Wplus).norm() == 0.0);

    CurvatureDecomp ein;
    ein.s = 0.6;
    ein.Wplus << 1, 0, 0, 0, -0.5, 0, 0, 0, -0.5;
    auto e = onshell_weyl(ein, 0.3);
    CHECK(e.plus.scalar == 0.0);
    CHECK(e.minus.scalar == 0.0);
    CHECK(e.quaternionic(1e-12));

    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    CurvatureDecomp r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.Wminus(i, j) = n(rng);
            r.Cplus(i, j) = n(rng);
        }
    r.s = n(rng);
    CHECK(!onshell_weyl(r, 0.1).quaternionic(1e-6));
}

TEST_CASE("Taub-NUT family")
{
    for (auto [m, r] : {std::pair{1.0, 3.0}, std::pair{2.0, 2.5}}) {
        auto d = taub_nut_check(m, r);
        CHECK(classify_geometry(d, 1e-8 * (1.0 + d.Wplus.norm())).self_dual);
        CHECK(d.Wplus.norm() > 1e-6);
    }
    double near = taub_nut_check(1.0, 10.0).riemann_norm();
    double far = taub_nut_check(1.0, 1e4).riemann_norm();
    CHECK(far < 1e-6 * near);
    CHECK(far < 1e-8);
    CHECK_THROWS_AS(taub_nut_check(1.0, 0.5), Error);
    CHECK_THROWS_AS(taub_nut_check(-1.0, 3.0), Error);
}

TEST_CASE("endpoint classes")
{
    auto nut = integrate(System::DarbouxHalphen, two_equal(1.0, 0.0, -1.0), 1e6, 1e-10);
    CHECK(classify_endpoint(nut, EndpointSide::Upper).kind == EndpointKind::Nut);

    auto taub = integrate(System::DarbouxHalphen, two_equal(1.0, 0.0, -1.0), -1.0, 1e-10);
    CHECK(classify_endpoint(taub, EndpointSide::Lower).kind == EndpointKind::TaubianInfinity);

    auto sing = integrate(System::DarbouxHalphen, two_equal(2.0, 0.0, 0.5), -1.0, 1e-10);
    REQUIRE(sing.reason == Termination::RootCrossing);
    auto sc = classify_endpoint(sing, EndpointSide::Lower);
    CHECK(sc.kind == EndpointKind::CurvatureSingularity);
    CHECK(sc.exponents[0] == Approx(1.0 / 3.0).epsilon(0.15));
    CHECK(sc.exponents[2] == Approx(-1.0 / 3.0).epsilon(0.15));

    auto bolt = classify_endpoint(sample_halphen(1.0, 10.0, 2000), EndpointSide::Upper);
    CHECK(bolt.kind == EndpointKind::Bolt);
    CHECK(bolt.n == Approx(4.0).epsilon(0.025));
    CHECK(bolt.zeta == Approx(std::sqrt(pi / 2.0)).epsilon(0.02));

    auto origin = classify_endpoint(sample_halphen(2.0, 0.05, 2000), EndpointSide::Lower);
    CHECK(origin.kind == EndpointKind::Undetermined);
}

TEST_CASE("endpoint classification needs data")
{
    Trajectory empty;
    CHECK_THROWS_AS(classify_endpoint(empty, EndpointSide::Upper), Error);
    auto shortrun = sample_halphen(1.0, 1.1, 2);
    try {
        classify_endpoint(shortrun, EndpointSide::Upper);
        FAIL("expected InsufficientData");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientData);
    }
}

TEST_CASE("endpoint kind names")
{
    CHECK(std::string(endpoint_kind_name(EndpointKind::Nut)) == "nut");
    CHECK(std::string(endpoint_kind_name(EndpointKind::Bolt)) == "bolt");
}
