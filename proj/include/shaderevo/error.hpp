#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shaderevo {

enum class ErrorCode {
    UnknownKind,
    IncompatibleDimensions,
    CyclicGraph,
    UnknownNode,
    UnknownSlot,
    WouldCycle,
    TypeMismatch,
    CannotRemoveMaster,
    UnsupportedGenome,
    NoCompatibleSlot,
    TooManySeeds,
    UnknownIndividual,
    IdenticalParents,
    InvalidConfig,
    StorageFailure,
    ParseError,
    SchemaError,
    VersionError,
    ManifestMismatch,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace shaderevo
