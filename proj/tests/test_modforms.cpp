#include <doctest.h>

#include <cmath>
#include <random>

#include "halphen_lab/modforms.hpp"

using namespace hl;
using doctest::Approx;

namespace {

const double gamma_quarter = std::tgamma(0.25);

ModularPoint mp(double re, double im) { return ModularPoint(re, im); }

cplx theta_char_shifted(cplx alpha, cplx beta, cplx w, cplx v, cplx z)
{
    ModularPoint t(z);
    return std::exp(I * pi * z * w * w + 2.0 * pi * I * w * (v + beta / 2.0)) *
           theta_char({alpha, beta}, v + w * z, t);
}

} // namespace

TEST_CASE("ModularPoint rejects the real axis and low imaginary parts")
{
    CHECK_THROWS_AS(ModularPoint(0.3, 0.0), Error);
    CHECK_THROWS_AS(ModularPoint(0.3, -1.0), Error);
    ModularPoint low(0.3, 0.01);
    try {
        dedekind_eta(low);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
    ModularPoint t(0.2, 1.0);
    CHECK(std::abs(t.nome()) < 1.0);
    CHECK(std::abs(t.nome() - std::exp(2.0 * pi * I * t.tau())) < 1e-15);
}

TEST_CASE("QTruncation validation")
{
    CHECK_THROWS_AS(dedekind_eta(mp(0, 1), {0.0, 10}), Error);
    try {
        dedekind_eta(mp(0, 0.1), {1e-14, 3});
        FAIL("expected TruncationNotReached");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TruncationNotReached);
    }
}

TEST_CASE("dedekind eta")
{
    cplx e = dedekind_eta(mp(0, 1));
    CHECK(e.real() == Approx(gamma_quarter / (2.0 * std::pow(pi, 0.75))).epsilon(1e-13));
    CHECK(std::abs(e.imag()) < 1e-15);

    cplx e10 = dedekind_eta(mp(0, 10));
    CHECK(std::abs(e10 / std::exp(-20.0 * pi / 24.0) - 1.0) < 1e-12);

    cplx z{0.3, 1.1};
    cplx lhs = dedekind_eta(ModularPoint(-1.0 / z));
    cplx rhs = std::sqrt(-I * z) * dedekind_eta(ModularPoint(z));
    CHECK(std::abs(std::abs(lhs) - std::abs(rhs)) < 1e-12);
    CHECK(std::abs(lhs - rhs) < 1e-12);

    cplx ref{0.747752199582902804368, 0.0581372040522836394831};
    CHECK(std::abs(dedekind_eta(ModularPoint(z)) - ref) < 1e-12);
    CHECK(std::abs(dedekind_eta(ModularPoint(z), {1e-16}) - ref) < 1e-14);

    // q^(1/24) uses the principal logarithm of q, so eta depends on tau only through q
    CHECK(std::abs(dedekind_eta(mp(0.7, 1.1)) - dedekind_eta(mp(-0.3, 1.1))) < 1e-15);
}

TEST_CASE("holomorphic Eisenstein series")
{
    CHECK(eisenstein_holo(2, mp(0, 1)).real() == Approx(3.0 / pi).epsilon(1e-13));
    CHECK(std::abs(eisenstein_holo(6, mp(0, 1))) < 1e-12);
    ModularPoint rho(std::exp(2.0 * pi * I / 3.0));
    CHECK(std::abs(eisenstein_holo(4, rho)) < 1e-12);
    CHECK(eisenstein_holo(4, mp(0, 1)).real() ==
          Approx(3.0 * std::pow(gamma_quarter, 8) / std::pow(2.0 * pi, 6)).epsilon(1e-13));

    ModularPoint t(0.1, 1.2);
    CHECK(std::abs(eisenstein_holo(2, t) - cplx{0.989674053523144571455, -0.00751703324292348034}) < 1e-13);
    CHECK(std::abs(eisenstein_holo(4, t) - cplx{1.10338489740013993419, 0.0755580232045957449}) < 1e-13);
    CHECK(std::abs(eisenstein_holo(6, t) - cplx{0.781840910813717095201, -0.161937104178022018546}) < 1e-13);
    CHECK_THROWS_AS(eisenstein_holo(8, t), Error);
}

TEST_CASE("theta functions at a generic point")
{
    ModularPoint t(0.2, 0.9);
    cplx v{0.1, 0.2};
    // theta[1;1] is minus the Jacobi theta_1 of most tables
    const cplx ref[4] = {{-0.269044620217604501651, -0.668332849475790223773},
                         {1.15746285259348988846, -0.0198204374694756413719},
                         {1.21312898794316033360, 0.0161579162766622616612},
                         {0.786962894689304125448, -0.0158713547993949922876}};
    for (int j = 1; j <= 4; ++j)
        CHECK(std::abs(theta(j, v, t) - ref[j - 1]) < 1e-13);
    CHECK_THROWS_AS(theta(5, v, t), Error);
}

TEST_CASE("theta constants")
{
    ModularPoint i1(0, 1);
    CHECK(theta(3, 0.0, i1).real() == Approx(std::pow(pi, 0.25) / std::tgamma(0.75)).epsilon(1e-14));
    CHECK(theta(3, 0.0, i1).real() == Approx(1.08643481121330801458).epsilon(1e-14));
    for (cplx tau : {cplx{0, 1}, cplx{0.3, 0.7}, cplx{-0.4, 2.1}})
        CHECK(std::abs(theta(1, 0.0, ModularPoint(tau))) < 1e-15);
    auto c = theta_constants(i1);
    CHECK(std::abs(std::pow(c.t2, 4) + std::pow(c.t4, 4) - std::pow(c.t3, 4)) < 1e-12);
}

TEST_CASE("theta with characteristics matches the classical thetas")
{
    ModularPoint t(0.15, 0.8);
    cplx v{0.05, -0.1};
    CHECK(std::abs(theta_char({1, 1}, v, t) - theta(1, v, t)) < 1e-14);
    CHECK(std::abs(theta_char({1, 0}, v, t) - theta(2, v, t)) < 1e-14);
    CHECK(std::abs(theta_char({0, 0}, v, t) - theta(3, v, t)) < 1e-14);
    CHECK(std::abs(theta_char({0, 1}, v, t) - theta(4, v, t)) < 1e-14);
    CHECK(std::abs(theta_char({0, 0}, 0.0, mp(0, 1)) - theta(3, 0.0, mp(0, 1))) < 1e-15);
    CHECK(std::abs(theta_char({1, 1}, 0.0, mp(0.3, 0.6))) < 1e-15);
}

TEST_CASE("characteristic shift relation")
{
    cplx z{0, 1.3};
    ModularPoint t(z);
    // the identity at alpha = 0, beta = 1, w = 1, v = 0
    cplx lhs = theta_char({2.0, 1.0}, 0.0, t);
    cplx rhs = theta_char_shifted(0.0, 1.0, 1.0, 0.0, z);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    // first equality: a shift of b by 2v is a shift of the argument by v
    cplx v{0.2, 0.1};
    CHECK(std::abs(theta_char({0.3, 0.4 + 2.0 * v}, 0.0, t) - theta_char({0.3, 0.4}, v, t)) < 1e-12);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0), im(0.5, 2.0);
    for (int k = 0; k < 10; ++k) {
        cplx alpha{u(rng), 0.3 * u(rng)}, beta{u(rng), 0.3 * u(rng)};
        double w = std::round(2.0 * u(rng));
        cplx vv{0.5 * u(rng), 0.2 * u(rng)};
        cplx zz{0.5 * u(rng), im(rng)};
        cplx l = theta_char({alpha + 2.0 * w, beta}, vv, ModularPoint(zz));
        cplx r = theta_char_shifted(alpha, beta, w, vv, zz);
        CHECK(std::abs(l - r) < 1e-10 * std::max(1.0, std::abs(l)));
    }
}

TEST_CASE("theta v-derivative")
{
    CHECK(std::abs(theta_char_vderiv({0, 0}, 0.0, mp(0.1, 1))) < 1e-15);
    cplx d1 = theta_char_vderiv({1, 1}, 0.0, mp(0, 1));
    cplx eta3 = std::pow(dedekind_eta(mp(0, 1)), 3);
    CHECK(std::abs(d1 + 2.0 * pi * eta3) < 1e-12);
    CHECK(d1.real() == Approx(-2.84869460398779).epsilon(1e-12));

    ModularPoint t(0.2, 1.1);
    const double h = 1e-5;
    cplx fd = (theta_char({1, 0}, h, t) - theta_char({1, 0}, -h, t)) / (2.0 * h);
    CHECK(std::abs(fd - theta_char_vderiv({1, 0}, 0.0, t)) < 1e-8);

    cplx v0{0.1, -0.05};
    cplx fd2 = (theta_char({0.3, 0.7}, v0 + h, t) - theta_char({0.3, 0.7}, v0 - h, t)) / (2.0 * h);
    CHECK(std::abs(fd2 - theta_char_vderiv({0.3, 0.7}, v0, t)) < 1e-8);
}

TEST_CASE("theta tau-derivative satisfies the heat equation")
{
    ModularPoint t(0.1, 0.9);
    for (int j = 0; j < 4; ++j) {
        ThetaChar ch{double(j / 2), double(j % 2)};
        cplx v{0.07, 0.02};
        const double h = 1e-3;
        cplx vv = (-theta_char(ch, v + 2.0 * h, t) + 16.0 * theta_char(ch, v + h, t) - 30.0 * theta_char(ch, v, t) +
                   16.0 * theta_char(ch, v - h, t) - theta_char(ch, v - 2.0 * h, t)) /
                  (12.0 * h * h);
        CHECK(std::abs(theta_char_tauderiv(ch, v, t) - vv / (4.0 * pi * I)) < 1e-6);
    }
}

TEST_CASE("Moebius transformations")
{
    ModularPoint t(0.3, 0.9);
    CHECK(std::abs(apply_moebius(Moebius::identity(), t).tau() - t.tau()) < 1e-15);
    CHECK(std::abs(apply_moebius({0, -1, 1, 0}, mp(0, 1)).tau() - I) < 1e-15);
    CHECK(std::abs(apply_moebius({1, 1, 0, 1}, t).tau() - cplx{1.3, 0.9}) < 1e-15);
    Moebius m(2.0, 0.0, 0.0, 2.0);
    CHECK(std::abs(m.det() - 1.0) < 1e-15);
    CHECK(std::abs(m.apply(0.5) - 0.5) < 1e-15);
    try {
        Moebius(0.0, -1.0, 1.0, 0.0).apply(0.0);
        FAIL("expected PoleHit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleHit);
    }
}

TEST_CASE("Jacobi quartic identity at random points")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.5, 3.0);
    for (int k = 0; k < 20; ++k) {
        ModularPoint t(re(rng), im(rng));
        auto c = theta_constants(t);
        CHECK(std::abs(std::pow(c.t2, 4) + std::pow(c.t4, 4) - std::pow(c.t3, 4)) < 1e-10);
    }
}

TEST_CASE("Eisenstein transformation laws")
{
    for (cplx tau : {cplx{0.1, 1.1}, cplx{-0.3, 0.8}, cplx{0.45, 1.7}}) {
        ModularPoint t(tau), s(-1.0 / tau);
        cplx e2 = eisenstein_holo(2, s) - tau * tau * eisenstein_holo(2, t) - 12.0 * tau / (2.0 * pi * I);
        CHECK(std::abs(e2) < 1e-9);
        CHECK(std::abs(eisenstein_holo(4, s) - std::pow(tau, 4) * eisenstein_holo(4, t)) < 1e-9);
        CHECK(std::abs(eisenstein_holo(6, s) - std::pow(tau, 6) * eisenstein_holo(6, t)) < 1e-9);
    }
}

TEST_CASE("E2 is the logarithmic derivative of eta")
{
    cplx z{0.2, 1.05};
    const double h = 1e-4;
    auto logeta = [](cplx w) { return std::log(dedekind_eta(ModularPoint(w))); };
    cplx d = (logeta(z + h) - logeta(z - h)) / (2.0 * h);
    CHECK(std::abs(12.0 / (I * pi) * d - eisenstein_holo(2, ModularPoint(z))) < 1e-8);
}

TEST_CASE("theta periodicity in v")
{
    ModularPoint t(0.25, 0.75);
    for (ThetaChar ch : {ThetaChar{0.3, 0.4}, ThetaChar{1, 0}, ThetaChar{1, 1}, ThetaChar{{0.5, 0.1}, -0.2}}) {
        cplx v{0.12, 0.03};
        cplx lhs = theta_char(ch, v + 1.0, t);
        cplx rhs = std::exp(I * pi * ch.a) * theta_char(ch, v, t);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}
