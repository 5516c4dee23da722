#include "qdich/error.hpp"

namespace qdich {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::TooManyQubits: return "TooManyQubits";
        case ErrorCode::ExactBackendUnsupportedGate: return "ExactBackendUnsupportedGate";
        case ErrorCode::ZeroPostSelectionProbability: return "ZeroPostSelectionProbability";
        case ErrorCode::ZeroMatrixElement: return "ZeroMatrixElement";
        case ErrorCode::NoUnitaryW: return "NoUnitaryW";
        case ErrorCode::UnsupportedGate: return "UnsupportedGate";
        case ErrorCode::InvariantViolated: return "InvariantViolated";
        case ErrorCode::NonDiagonalResidue: return "NonDiagonalResidue";
        case ErrorCode::NotIntegerValued: return "NotIntegerValued";
        case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
        case ErrorCode::PostSelectionUnsupported: return "PostSelectionUnsupported";
    }
    return "Unknown";
}

}  // namespace qdich
