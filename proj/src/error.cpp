#include "shaderevo/error.hpp"

namespace shaderevo {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownKind: return "UnknownKind";
        case ErrorCode::IncompatibleDimensions: return "IncompatibleDimensions";
        case ErrorCode::CyclicGraph: return "CyclicGraph";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::UnknownSlot: return "UnknownSlot";
        case ErrorCode::WouldCycle: return "WouldCycle";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::CannotRemoveMaster: return "CannotRemoveMaster";
        case ErrorCode::UnsupportedGenome: return "UnsupportedGenome";
        case ErrorCode::NoCompatibleSlot: return "NoCompatibleSlot";
        case ErrorCode::TooManySeeds: return "TooManySeeds";
        case ErrorCode::UnknownIndividual: return "UnknownIndividual";
        case ErrorCode::IdenticalParents: return "IdenticalParents";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::StorageFailure: return "StorageFailure";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::VersionError: return "VersionError";
        case ErrorCode::ManifestMismatch: return "ManifestMismatch";
    }
    return "Unknown";
}

}  // namespace shaderevo
