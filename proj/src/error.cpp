#include "actsem/error.hpp"

namespace actsem {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedHeader: return "MalformedHeader";
        case ErrorCode::FrameCountMismatch: return "FrameCountMismatch";
        case ErrorCode::NonFiniteCoordinate: return "NonFiniteCoordinate";
        case ErrorCode::UnsupportedJointCount: return "UnsupportedJointCount";
        case ErrorCode::WrongJointCount: return "WrongJointCount";
        case ErrorCode::InvalidJointId: return "InvalidJointId";
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::DegenerateBone: return "DegenerateBone";
        case ErrorCode::ZeroTargetLength: return "ZeroTargetLength";
        case ErrorCode::InvalidEdgeIndex: return "InvalidEdgeIndex";
        case ErrorCode::ZeroFrames: return "ZeroFrames";
        case ErrorCode::EvenWindow: return "EvenWindow";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::VersionUnsupported: return "VersionUnsupported";
        case ErrorCode::DimChainBroken: return "DimChainBroken";
        case ErrorCode::TruncatedStream: return "TruncatedStream";
        case ErrorCode::BadChecksum: return "BadChecksum";
        case ErrorCode::DimMismatchAcrossFrames: return "DimMismatchAcrossFrames";
        case ErrorCode::InvalidRange: return "InvalidRange";
        case ErrorCode::AllBelowThreshold: return "AllBelowThreshold";
        case ErrorCode::NoCentroids: return "NoCentroids";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::MalformedImage: return "MalformedImage";
        case ErrorCode::ClassListMismatch: return "ClassListMismatch";
        case ErrorCode::EmptyScores: return "EmptyScores";
        case ErrorCode::UnknownClass: return "UnknownClass";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::BadVersion: return "BadVersion";
        case ErrorCode::ReservedBitsSet: return "ReservedBitsSet";
        case ErrorCode::DuplicateClassId: return "DuplicateClassId";
        case ErrorCode::InvalidNodeToken: return "InvalidNodeToken";
        case ErrorCode::GlyphInvariantViolation: return "GlyphInvariantViolation";
        case ErrorCode::DuplicateGlyph: return "DuplicateGlyph";
        case ErrorCode::MalformedLine: return "MalformedLine";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace actsem
