#include "halphen_lab/modforms.hpp"

#include <cmath>

#include "halphen_lab/special.hpp"

namespace hl {

namespace {

void check_point(const ModularPoint& tau)
{
    if (tau.im() < ModularPoint::min_imag)
        fail(ErrorCode::DomainError, "Im(tau) below 0.05; fold with apply_moebius first");
}

// Sums f(m) * exp(i pi tau x^2 + 2 pi i w x), x = m + a/2, outward from the
// peak of the Gaussian envelope. weight_degree is the polynomial degree of f.
template <class Weight>
cplx theta_series(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc, Weight weight,
                  int weight_degree)
{
    trunc.validate();
    check_point(tau);
    const cplx t = tau.tau();
    const double y = tau.im();
    const cplx half_a = 0.5 * ch.a;
    const cplx w = v + 0.5 * ch.b;
    const double centre = -((t * half_a).imag() + w.imag()) / y;
    const double m0 = std::round(centre);

    auto term = [&](double m) {
        cplx x = m + half_a;
        return weight(x) * std::exp(I * pi * t * x * x + 2.0 * pi * I * w * x);
    };

    CompensatedSum<cplx> sum;
    sum.add(term(m0));
    std::size_t used = 1;
    for (long k = 1;; ++k) {
        cplx up = term(m0 + k);
        cplx down = term(m0 - k);
        sum.add(up);
        sum.add(down);
        used += 2;
        double scale = trunc.tol * std::max(1.0, std::abs(sum.value()));
        double d = std::max(0.0, double(k) - std::abs(m0 - centre));
        double ratio = std::exp(-pi * y * (2.0 * d + 1.0));
        if (weight_degree > 0)
            ratio *= std::pow(1.0 + 1.0 / std::max(1.0, d), weight_degree);
        double biggest = std::max(std::abs(up), std::abs(down));
        if (ratio < 1.0 && biggest < scale) {
            double tail = 2.0 * biggest * ratio / (1.0 - ratio);
            if (tail < scale)
                return sum.value();
        }
        if (used >= trunc.max_terms)
            fail(ErrorCode::TruncationNotReached, "theta series exhausted max_terms");
    }
}

} // namespace

cplx dedekind_eta(const ModularPoint& tau, const QTruncation& trunc)
{
    trunc.validate();
    check_point(tau);
    const cplx q = tau.nome();
    const double aq = std::abs(q);
    cplx prod = 1.0;
    cplx qn = 1.0;
    double aqn = 1.0;
    for (std::size_t n = 1;; ++n) {
        qn *= q;
        aqn *= aq;
        prod *= (1.0 - qn);
        double tail = aqn * aq / ((1.0 - aq) * (1.0 - aqn * aq));
        if (tail < trunc.tol)
            break;
        if (n >= trunc.max_terms)
            fail(ErrorCode::TruncationNotReached, "eta product exhausted max_terms");
    }
    return std::exp(std::log(q) / 24.0) * prod;
}

cplx eisenstein_holo(int k, const ModularPoint& tau, const QTruncation& trunc)
{
    double coeff = 0.0;
    switch (k) {
    case 2: coeff = -24.0; break;
    case 4: coeff = 240.0; break;
    case 6: coeff = -504.0; break;
    default: fail(ErrorCode::InvalidArgument, "eisenstein_holo: k must be 2, 4 or 6");
    }
    trunc.validate();
    check_point(tau);
    const cplx q = tau.nome();
    const double aq = std::abs(q);
    const double peak = (k - 1) / -std::log(aq);
    CompensatedSum<cplx> sum;
    cplx qm = 1.0;
    for (std::size_t m = 1;; ++m) {
        qm *= q;
        double md = double(m);
        cplx term = std::pow(md, k - 1) * qm / (1.0 - qm);
        sum.add(term);
        double partial = std::abs(1.0 + coeff * sum.value());
        double scale = trunc.tol * std::max(1.0, partial);
        if (md > peak) {
            double aqm = std::abs(qm);
            double ratio = std::pow((md + 1.0) / md, k - 1) * aq * (1.0 + aqm) / (1.0 - aqm * aq);
            double mag = std::abs(coeff * term);
            if (ratio < 1.0 && mag < scale && mag * ratio / (1.0 - ratio) < scale)
                break;
        }
        if (m >= trunc.max_terms)
            fail(ErrorCode::TruncationNotReached, "Lambert series exhausted max_terms");
    }
    return 1.0 + coeff * sum.value();
}

cplx theta_char(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc)
{
    return theta_series(ch, v, tau, trunc, [](cplx) { return cplx{1.0, 0.0}; }, 0);
}

cplx theta_char_vderiv(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc)
{
    return theta_series(ch, v, tau, trunc, [](cplx x) { return 2.0 * pi * I * x; }, 1);
}

cplx theta_char_tauderiv(const ThetaChar& ch, cplx v, const ModularPoint& tau, const QTruncation& trunc)
{
    return theta_series(ch, v, tau, trunc, [](cplx x) { return I * pi * x * x; }, 2);
}

cplx theta(int j, cplx v, const ModularPoint& tau, const QTruncation& trunc)
{
    switch (j) {
    case 1: return theta_char({1.0, 1.0}, v, tau, trunc);
    case 2: return theta_char({1.0, 0.0}, v, tau, trunc);
    case 3: return theta_char({0.0, 0.0}, v, tau, trunc);
    case 4: return theta_char({0.0, 1.0}, v, tau, trunc);
    default: fail(ErrorCode::InvalidArgument, "theta: j must be in 1..4");
    }
}

ThetaConstants theta_constants(const ModularPoint& tau, const QTruncation& trunc)
{
    return {theta(2, 0.0, tau, trunc), theta(3, 0.0, tau, trunc), theta(4, 0.0, tau, trunc)};
}

ModularPoint apply_moebius(const Moebius& m, const ModularPoint& tau) { return ModularPoint(m.apply(tau.tau())); }

} // namespace hl
