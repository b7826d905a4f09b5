#include "halphen_lab/special.hpp"

#include <cmath>

namespace hl {

namespace {

constexpr int kBorweinTerms = 64;

// Dirichlet eta function for s > 0 (Borwein's algorithm 2).
double dirichlet_eta(double s)
{
    constexpr int n = kBorweinTerms;
    double d[n + 1];
    double term = 1.0 / n;
    double acc = term;
    d[0] = n * acc;
    for (int i = 1; i <= n; ++i) {
        term *= 4.0 * double(n + i - 1) * double(n - i + 1) / ((2.0 * i) * (2.0 * i - 1.0));
        acc += term;
        d[i] = n * acc;
    }
    CompensatedSum<double> sum;
    for (int k = 0; k < n; ++k) {
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum.add(sign * (d[k] - d[n]) / std::pow(k + 1.0, s));
    }
    return -sum.value() / d[n];
}

bool near_integer(double x, double value) { return std::abs(x - value) < 1e-14; }

} // namespace

double zeta(double s)
{
    require(std::isfinite(s), ErrorCode::InvalidArgument, "zeta: argument must be finite");
    if (near_integer(s, 1.0))
        fail(ErrorCode::PoleAtS, "zeta has a pole at s = 1");
    if (s == 0.0)
        return -0.5;
    if (s >= 30.0) {
        double sum = 1.0;
        for (int k = 2; k < 8; ++k)
            sum += std::pow(double(k), -s);
        return sum;
    }
    if (s > 0.0)
        return dirichlet_eta(s) / (1.0 - std::pow(2.0, 1.0 - s));
    // Functional equation; the sine vanishes at negative even integers.
    double half = 0.5 * s;
    if (std::abs(half - std::round(half)) < 1e-15)
        return 0.0;
    return std::pow(2.0, s) * std::pow(pi, s - 1.0) * std::sin(pi * half) * std::tgamma(1.0 - s) * zeta(1.0 - s);
}

double completed_zeta(double s)
{
    require(std::isfinite(s), ErrorCode::InvalidArgument, "completed_zeta: argument must be finite");
    if (near_integer(s, 0.0) || near_integer(s, 1.0))
        fail(ErrorCode::PoleAtS, "completed zeta has poles at s = 0 and s = 1");
    if (s > 0.0)
        return zeta(s) * std::tgamma(0.5 * s) * std::pow(pi, -0.5 * s);
    // sin(pi s/2) Gamma(s/2) = pi / Gamma(1 - s/2) removes the removable zeros.
    return std::pow(2.0, s) * std::pow(pi, s - 1.0) * pi / std::tgamma(1.0 - 0.5 * s) * std::tgamma(1.0 - s) *
           zeta(1.0 - s) * std::pow(pi, -0.5 * s);
}

double bessel_k(double nu, double x)
{
    require(x > 0.0 && std::isfinite(x), ErrorCode::DomainError, "bessel_k: x must be positive");
    nu = std::abs(nu);
    if (x > 740.0)
        return 0.0;

    double twice = 2.0 * nu;
    if (std::abs(twice - std::round(twice)) < 1e-14 && std::lround(twice) % 2 == 1) {
        long n = std::lround(nu - 0.5);
        double sum = 0.0;
        double coeff = 1.0; // (n+k)! / (k! (n-k)!) / (2x)^k
        for (long k = 0; k <= n; ++k) {
            if (k > 0)
                coeff *= double(n + k) * double(n - k + 1) / (double(k) * 2.0 * x);
            sum += coeff;
        }
        return std::sqrt(pi / (2.0 * x)) * std::exp(-x) * sum;
    }

    // Trapezoidal rule on the integral representation, scaled by e^{x};
    // the integrand is analytic in a strip so halving h converges geometrically.
    auto integrand = [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
    auto trapezoid = [&](double h) {
        double sum = 0.5 * integrand(0.0);
        for (long k = 1;; ++k) {
            double f = integrand(k * h);
            sum += f;
            if (f < 1e-18 * sum && k * h > 1.0)
                break;
            if (k > 200000)
                fail(ErrorCode::NotConverged, "bessel_k: quadrature did not terminate");
        }
        return sum * h;
    };
    double h = 0.5;
    double prev = trapezoid(h);
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        double cur = trapezoid(h);
        if (std::abs(cur - prev) <= 1e-15 * std::abs(cur))
            return cur * std::exp(-x);
        prev = cur;
    }
    return prev * std::exp(-x);
}

double divisor_sigma(double alpha, std::int64_t n)
{
    require(n >= 1, ErrorCode::InvalidArgument, "divisor_sigma: n must be >= 1");
    double sum = 0.0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        std::int64_t e = n / d;
        sum += std::pow(double(d), alpha);
        if (e != d)
            sum += std::pow(double(e), alpha);
    }
    return sum;
}

namespace {
double pairwise(const double* p, std::size_t n)
{
    if (n == 0)
        return 0.0;
    if (n == 1)
        return p[0];
    std::size_t half = n / 2;
    return pairwise(p, half) + pairwise(p + half, n - half);
}
} // namespace

double pairwise_sum(const std::vector<double>& parts) { return pairwise(parts.data(), parts.size()); }

} // namespace hl
