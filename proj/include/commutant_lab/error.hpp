#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace commutant_lab {

enum class ErrorKind {
    NonFinite,
    BilateralMismatch,
    UnboundedGrowth,
    WindowOverflow,
    DomainError,
    PreconditionViolated,
    ConvergenceFailure,
    ZeroVector,
    SearchFailure,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::BilateralMismatch: return "BilateralMismatch";
        case ErrorKind::UnboundedGrowth: return "UnboundedGrowth";
        case ErrorKind::WindowOverflow: return "WindowOverflow";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::SearchFailure: return "SearchFailure";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above.
class LabError : public std::runtime_error {
public:
    LabError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw LabError(kind, what);
}

}  // namespace commutant_lab
