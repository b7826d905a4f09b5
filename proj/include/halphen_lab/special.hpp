#ifndef HALPHEN_LAB_SPECIAL_HPP
#define HALPHEN_LAB_SPECIAL_HPP

#include <cstdint>
#include <vector>

#include "halphen_lab/types.hpp"

namespace hl {

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
public:
    void add(T x) noexcept
    {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const noexcept { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

/// Riemann zeta for real s != 1. Uses the accelerated alternating series for
/// s > 0 and the functional equation below.
double zeta(double s);

/// xi(s) = zeta(s) Gamma(s/2) pi^{-s/2}; throws PoleAtS at s in {0, 1}.
double completed_zeta(double s);

/// Modified Bessel function of the second kind K_nu(x), x > 0.
double bessel_k(double nu, double x);

/// sigma_alpha(n) = sum of d^alpha over the divisors of n.
double divisor_sigma(double alpha, std::int64_t n);

/// Pairwise sum of partial results, in the given order.
double pairwise_sum(const std::vector<double>& parts);

} // namespace hl

#endif
