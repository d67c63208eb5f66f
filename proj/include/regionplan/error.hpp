#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regionplan {

enum class ErrorKind {
  kInvalidArgument,
  kMalformedGrid,
  kInfeasibleParams,
  kNoConnectedPair,
  kFormatError,
  kValueError,
  kOutOfBounds,
  kNonFiniteField,
  kEmptyDiagram,
  kShapeMismatch,
  kNonFiniteInput,
  kPathBlocked,
  kDimensionMismatch,
  kEmptyRegion,
  kDisconnectedRegion,
  kNoLocalPath,
  kNoPath,
  kEmptyInput,
  kMissingReference,
  kIoError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace regionplan
