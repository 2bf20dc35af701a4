#include "flee/core/error.hpp"

namespace flee {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::DuplicateFlow: return "DuplicateFlow";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::UnknownRegion: return "UnknownRegion";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::AllZeroShares: return "AllZeroShares";
    case ErrorKind::NoFlowsInGroup: return "NoFlowsInGroup";
    case ErrorKind::SaturatedTripleSpace: return "SaturatedTripleSpace";
    case ErrorKind::EmptyEdgeSet: return "EmptyEdgeSet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Io: return "Io";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
    case ErrorKind::CorruptChecksum: return "CorruptChecksum";
    case ErrorKind::MissingTarget: return "MissingTarget";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::NodeWithoutRegion: return "NodeWithoutRegion";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::KeyMismatch: return "KeyMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::DigestMismatch: return "DigestMismatch";
    case ErrorKind::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

}  // namespace flee
