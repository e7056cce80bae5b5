#pragma once

#include <stdexcept>
#include <string>

namespace psr {

enum class ErrorKind {
    DimensionMismatch,
    InvalidArgument,
    NotHyperbolic,
    LevelMismatch,
    NumericalFailure,
    OutsideDomain,
    AlphaNonpositive,
    NoPositiveRoot,
    NotCCPSR,
    ConvergenceFailure,
    DegeneratePlane,
    StencilExit,
    EndpointNotClosed,
    MalformedInput,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require_dim(long got, long want, const char* what)
{
    if (got != want)
        fail(ErrorKind::DimensionMismatch,
             std::string(what) + ": expected " + std::to_string(want) + ", got " + std::to_string(got));
}

} // namespace psr
