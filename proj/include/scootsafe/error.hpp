#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scootsafe {

/// Failure classes raised by the library. The CLI maps each to an exit code.
enum class ErrorKind {
    InvalidArgument,
    UndefinedBearing,
    ProjectionDomain,
    DegenerateTrajectory,
    NoOverlap,
    EmptyInput,
    EmptyCorpus,
    Unclassifiable,
    InfeasibleSpec,
    MalformedInput,
    Io,
};

inline constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::UndefinedBearing: return "undefined-bearing";
    case ErrorKind::ProjectionDomain: return "projection-domain";
    case ErrorKind::DegenerateTrajectory: return "degenerate-trajectory";
    case ErrorKind::NoOverlap: return "no-overlap";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::EmptyCorpus: return "empty-corpus";
    case ErrorKind::Unclassifiable: return "unclassifiable";
    case ErrorKind::InfeasibleSpec: return "infeasible-spec";
    case ErrorKind::MalformedInput: return "malformed-input";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace scootsafe
