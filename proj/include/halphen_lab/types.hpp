#ifndef HALPHEN_LAB_TYPES_HPP
#define HALPHEN_LAB_TYPES_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

#include "halphen_lab/error.hpp"

namespace hl {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Point of the upper half-plane together with its nome q = exp(2 pi i tau).
class ModularPoint {
public:
    // Below this imaginary part the q-series are not evaluated; fold with
    // apply_moebius first.
    static constexpr double min_imag = 0.05;

    explicit ModularPoint(cplx tau);
    ModularPoint(double re, double im) : ModularPoint(cplx{re, im}) {}

    cplx tau() const noexcept { return tau_; }
    double re() const noexcept { return tau_.real(); }
    double im() const noexcept { return tau_.imag(); }
    cplx nome() const noexcept { return q_; }
    // exp(i pi tau), the nome of the theta series.
    cplx half_nome() const noexcept { return q_half_; }

private:
    cplx tau_;
    cplx q_;
    cplx q_half_;
};

struct QTruncation {
    double tol = 1e-12;
    std::size_t max_terms = 1'000'000;

    void validate() const
    {
        require(tol > 0.0 && std::isfinite(tol), ErrorCode::InvalidArgument, "QTruncation.tol must be > 0");
        require(max_terms >= 1, ErrorCode::InvalidArgument, "QTruncation.max_terms must be >= 1");
    }
};

/// Theta characteristics [a; b]; integer values mod 2 give the classical thetas.
struct ThetaChar {
    cplx a{0.0, 0.0};
    cplx b{0.0, 0.0};
};

/// SL(2,C) matrix, renormalized to unit determinant on construction.
class Moebius {
public:
    Moebius(cplx a, cplx b, cplx c, cplx d);
    static Moebius identity() { return {1.0, 0.0, 0.0, 1.0}; }

    cplx a() const noexcept { return a_; }
    cplx b() const noexcept { return b_; }
    cplx c() const noexcept { return c_; }
    cplx d() const noexcept { return d_; }
    cplx det() const noexcept { return a_ * d_ - b_ * c_; }
    bool is_real() const noexcept;

    cplx denominator(cplx z) const noexcept { return c_ * z + d_; }
    cplx apply(cplx z) const;

private:
    cplx a_, b_, c_, d_;
};

/// Truncation policy for sums over the lattice Z + tau Z.
struct LatticeSumSpec {
    double cutoff = 120.0;    // include |m + n tau| <= cutoff
    double tail_order = 2.0;  // decay exponent assumed by tail estimates

    void validate() const
    {
        require(cutoff >= 2.0 && std::isfinite(cutoff), ErrorCode::InvalidArgument, "LatticeSumSpec cutoff must be >= 2");
        require(tail_order > 0.0, ErrorCode::InvalidArgument, "LatticeSumSpec tail_order must be > 0");
    }
};

struct MaassValue {
    double value = 0.0;
    double est_error = 0.0;
};

using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

} // namespace hl

#endif
