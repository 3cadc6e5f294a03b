#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace actsem {

enum class ErrorCode {
    // skeleton
    MalformedHeader,
    FrameCountMismatch,
    NonFiniteCoordinate,
    UnsupportedJointCount,
    WrongJointCount,
    InvalidJointId,
    EmptySequence,
    DegenerateBone,
    ZeroTargetLength,
    // graph
    InvalidEdgeIndex,
    ZeroFrames,
    EvenWindow,
    // gcn
    DimMismatch,
    BadMagic,
    VersionUnsupported,
    DimChainBroken,
    TruncatedStream,
    BadChecksum,
    // depth
    DimMismatchAcrossFrames,
    InvalidRange,
    AllBelowThreshold,
    NoCentroids,
    InvalidArgument,
    MalformedImage,
    // fusion / eval
    ClassListMismatch,
    EmptyScores,
    UnknownClass,
    MalformedRecord,
    // tactile
    BadVersion,
    ReservedBitsSet,
    DuplicateClassId,
    InvalidNodeToken,
    GlyphInvariantViolation,
    DuplicateGlyph,
    MalformedLine,
    // app
    Io,
    Config,
};

std::string_view to_string(ErrorCode code);

/// Every library failure is reported through this exception; `code()` lets
/// callers and tests dispatch on the failure class without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace actsem
