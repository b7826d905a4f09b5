#include "halphen_lab/maass.hpp"

#include <cmath>

#include "halphen_lab/parallel.hpp"

namespace hl {

MaassValue eisenstein_lattice(double s, const ModularPoint& tau, const LatticeSumSpec& spec)
{
    spec.validate();
    if (!(s > 1.0))
        fail(ErrorCode::DivergentParameter, "eisenstein_lattice needs s > 1");
    const double x = tau.re();
    const double y = tau.im();
    const double R = spec.cutoff;
    const double R2 = R * R;
    const double ys = std::pow(y, s);
    // Every lattice point inside the disk has max(|m|,|n|) <= K.
    const long n_top = long(std::floor(R / y));
    const long K = std::max(n_top, long(std::ceil(R + n_top * std::abs(x))));

    auto point = [&](long m, long n, CompensatedSum<double>& acc) {
        double re = m + n * x;
        double im = n * y;
        double r2 = re * re + im * im;
        if (r2 <= R2)
            acc.add(ys / std::pow(r2, s));
    };
    auto shell = [&](std::size_t idx) {
        long k = long(idx) + 1;
        CompensatedSum<double> acc;
        for (long m = -k; m <= k; ++m) {
            point(m, k, acc);
            point(m, -k, acc);
        }
        for (long n = -k + 1; n <= k - 1; ++n) {
            point(k, n, acc);
            point(-k, n, acc);
        }
        return acc.value();
    };
    double value = pairwise_sum(parallel_parts(std::size_t(K), shell));

    const double tail = pi * std::pow(y, s - 1.0) * std::pow(R, 2.0 - 2.0 * s) / (s - 1.0);
    const double cell = std::max(std::abs(1.0 + tau.tau()), std::abs(1.0 - tau.tau()));
    const double boundary = 2.0 * pi * R * cell / y * ys * std::pow(R, -2.0 * s);
    return {value, tail + boundary + 8.0 * 2.2e-16 * std::abs(value)};
}

namespace {

double inv_gamma(double s)
{
    if (s <= 0.0 && std::abs(s - std::round(s)) < 1e-15)
        return 0.0;
    return 1.0 / std::tgamma(s);
}

} // namespace

MaassValue eisenstein_fourier(double s, const ModularPoint& tau, int n_max)
{
    require(std::isfinite(s), ErrorCode::InvalidArgument, "eisenstein_fourier: s must be finite");
    require(n_max >= 0, ErrorCode::InvalidArgument, "eisenstein_fourier: n_max must be >= 0");
    for (double pole : {0.0, 0.5, 1.0})
        if (std::abs(s - pole) < 1e-14)
            fail(ErrorCode::PoleAtS, "eisenstein_fourier: s is a pole of the normalization");

    const double x = tau.re();
    const double y = tau.im();
    const double pref = std::pow(pi, s) * inv_gamma(s);
    const double nu = s - 0.5;

    const double zero_a = 2.0 * zeta(2.0 * s) * std::pow(y, s);
    const double zero_b = 2.0 * pref * completed_zeta(2.0 * s - 1.0) * std::pow(y, 1.0 - s);

    auto mode = [&](int n) {
        double arg = 2.0 * pi * n * y;
        double k = bessel_k(nu, arg);
        if (k == 0.0)
            return 0.0;
        return 4.0 * pref * std::sqrt(y) * divisor_sigma(2.0 * s - 1.0, n) * std::pow(double(n), -nu) * k * 2.0 *
               std::cos(2.0 * pi * n * x);
    };
    CompensatedSum<double> modes;
    for (int n = 1; n <= n_max; ++n)
        modes.add(mode(n));

    double value = zero_a + zero_b + modes.value();
    // Envelope of the first dropped mode (cosine set to 1) and its geometric tail.
    double next = std::abs(4.0 * pref * std::sqrt(y) * divisor_sigma(2.0 * s - 1.0, n_max + 1) *
                           std::pow(double(n_max + 1), -nu) * bessel_k(nu, 2.0 * pi * (n_max + 1) * y) * 2.0);
    // Successive modes shrink by at most q times the growth of sigma(n) n^-nu, bounded by 2^(|2s-1|+|nu|+1).
    double growth = std::pow(2.0, std::abs(2.0 * s - 1.0) + std::abs(nu) + 1.0);
    double ratio = std::min(0.9, std::exp(-2.0 * pi * y) * growth);
    double err = next / (1.0 - ratio) + 1e-13 * (std::abs(zero_a) + std::abs(zero_b) + std::abs(modes.value()));
    return {value, err};
}

int fourier_modes_for(double s, const ModularPoint& tau)
{
    double y = tau.im();
    double budget = 45.0 + std::max(0.0, std::abs(s)) * 2.0;
    return int(std::ceil(budget / (2.0 * pi * y))) + 2;
}

double laplacian_eigencheck(double s, const ModularPoint& tau, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "laplacian_eigencheck: h must be positive");
    const double y = tau.im();
    if (h > y / 10.0)
        fail(ErrorCode::StepTooLarge, "laplacian_eigencheck: h exceeds Im(tau)/10");
    const double x = tau.re();
    const int n_max = fourier_modes_for(s, ModularPoint(x, y - 2.0 * h));
    auto E = [&](double dx, double dy) { return eisenstein_fourier(s, ModularPoint(x + dx, y + dy), n_max).value; };

    const double f0 = E(0, 0);
    const double fxx = (-E(2 * h, 0) + 16 * E(h, 0) - 30 * f0 + 16 * E(-h, 0) - E(-2 * h, 0)) / (12 * h * h);
    const double fyy = (-E(0, 2 * h) + 16 * E(0, h) - 30 * f0 + 16 * E(0, -h) - E(0, -2 * h)) / (12 * h * h);
    return std::abs(y * y * (fxx + fyy) - s * (s - 1.0) * f0) / std::abs(f0);
}

} // namespace hl
