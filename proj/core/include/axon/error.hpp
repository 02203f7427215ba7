#pragma once

#include <stdexcept>
#include <string>

namespace axon {

/// Error taxonomy shared across the library. Each code corresponds to one
/// documented failure mode of a public operation.
enum class ErrorCode {
  UnsupportedWidth,
  InfeasibleConstraints,
  WidthTooLarge,
  KindMismatch,
  UnmappableNode,
  CycleDetected,
  DanglingNet,
  XState,
  UnmappedCell,
  SyntaxError,
  UnknownCell,
  MultipleDrivers,
  EmptyDesignSpace,
  BadConfig,
  IoError,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace axon
