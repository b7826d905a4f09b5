#ifndef HALPHEN_LAB_ERROR_HPP
#define HALPHEN_LAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hl {

// Numeric values are part of the C API (see halphen_lab.h) and must not change.
enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    TruncationNotReached = 2,
    PoleHit = 3,
    DomainError = 4,
    DivergentParameter = 5,
    PoleAtS = 6,
    StepTooLarge = 7,
    StepUnderflow = 8,
    DegenerateMetric = 9,
    InsufficientData = 10,
    ThetaZeroDivision = 11,
    SingularLambda = 12,
    KinematicsDegenerate = 13,
    NotConverged = 14,
    LatticePointHit = 15,
    WeightTooLarge = 16,
    DisconnectedGraph = 17,
    FitIllConditioned = 18,
    OutOfRange = 19,
    IoError = 20,
    ParseError = 21,
    Internal = 99,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const char* what)
{
    if (!cond)
        throw Error(code, what);
}

} // namespace hl

#endif
