#pragma once

#include <stdexcept>
#include <string>

namespace obnav {

enum class ErrorKind {
    CurvatureBoundViolated,
    SelfIntersection,
    NonpositiveDt,
    TargetCoincident,
    PlanMissing,
    NoTangentExists,
    MissingPsi,
    InfeasibleM,
    DegenerateForm,
    EpsilonOutOfRange,
    ScenarioParse,
    WorldParse,
    UnknownPreset,
    InvalidArgument,
};

const char* toString(ErrorKind kind);

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(toString(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace obnav
