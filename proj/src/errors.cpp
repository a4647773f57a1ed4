#include "obnav/errors.hpp"

namespace obnav {

const char* toString(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::CurvatureBoundViolated: return "CurvatureBoundViolated";
        case ErrorKind::SelfIntersection: return "SelfIntersection";
        case ErrorKind::NonpositiveDt: return "NonpositiveDt";
        case ErrorKind::TargetCoincident: return "TargetCoincident";
        case ErrorKind::PlanMissing: return "PlanMissing";
        case ErrorKind::NoTangentExists: return "NoTangentExists";
        case ErrorKind::MissingPsi: return "MissingPsi";
        case ErrorKind::InfeasibleM: return "InfeasibleM";
        case ErrorKind::DegenerateForm: return "DegenerateForm";
        case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case ErrorKind::ScenarioParse: return "ScenarioParse";
        case ErrorKind::WorldParse: return "WorldParse";
        case ErrorKind::UnknownPreset: return "UnknownPreset";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace obnav
