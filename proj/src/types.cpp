#include "halphen_lab/types.hpp"

namespace hl {

const char* error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TruncationNotReached: return "TruncationNotReached";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DivergentParameter: return "DivergentParameter";
    case ErrorCode::PoleAtS: return "PoleAtS";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ThetaZeroDivision: return "ThetaZeroDivision";
    case ErrorCode::SingularLambda: return "SingularLambda";
    case ErrorCode::KinematicsDegenerate: return "KinematicsDegenerate";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::LatticePointHit: return "LatticePointHit";
    case ErrorCode::WeightTooLarge: return "WeightTooLarge";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::FitIllConditioned: return "FitIllConditioned";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

ModularPoint::ModularPoint(cplx tau) : tau_(tau)
{
    require(std::isfinite(tau.real()) && std::isfinite(tau.imag()), ErrorCode::InvalidArgument,
            "ModularPoint: tau must be finite");
    require(tau.imag() > 0.0, ErrorCode::DomainError, "ModularPoint: Im(tau) must be positive");
    q_ = std::exp(2.0 * pi * I * tau);
    q_half_ = std::exp(pi * I * tau);
    require(std::abs(q_) < 1.0, ErrorCode::DomainError, "ModularPoint: |q| must be < 1");
}

Moebius::Moebius(cplx a, cplx b, cplx c, cplx d)
{
    cplx det = a * d - b * c;
    require(std::abs(det) > 1e-300 && std::isfinite(std::abs(det)), ErrorCode::InvalidArgument,
            "Moebius: matrix must be invertible");
    cplx root = std::sqrt(det);
    a_ = a / root;
    b_ = b / root;
    c_ = c / root;
    d_ = d / root;
}

bool Moebius::is_real() const noexcept
{
    auto small = [](cplx x) { return std::abs(x.imag()) <= 1e-14 * std::max(1.0, std::abs(x)); };
    return small(a_) && small(b_) && small(c_) && small(d_);
}

cplx Moebius::apply(cplx z) const
{
    cplx den = denominator(z);
    if (std::abs(den) < 1e-12)
        fail(ErrorCode::PoleHit, "Moebius: c z + d vanishes");
    return (a_ * z + b_) / den;
}

} // namespace hl
