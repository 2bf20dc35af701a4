#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flee {

enum class ErrorKind {
  MissingFile,
  SchemaViolation,
  DuplicateFlow,
  UnknownNode,
  UnknownRegion,
  EmptyGraph,
  AllZeroShares,
  NoFlowsInGroup,
  SaturatedTripleSpace,
  EmptyEdgeSet,
  DimensionMismatch,
  LengthMismatch,
  Io,
  VersionMismatch,
  CorruptChecksum,
  MissingTarget,
  EmptyCorpus,
  NodeWithoutRegion,
  ShapeMismatch,
  KeyMismatch,
  EmptyInput,
  ZeroVariance,
  BadConfig,
  DigestMismatch,
  InternalInvariant,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the toolkit carries a machine-readable kind so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

}  // namespace flee
