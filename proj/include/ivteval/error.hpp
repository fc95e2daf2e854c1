#pragma once

#include <stdexcept>
#include <string>

namespace ivt {

enum class ErrorCode {
  kInvalidArgument,
  kDuplicateId,
  kOutOfRange,
  kCountMismatch,
  kShapeMismatch,
  kNonBinary,
  kNonFinite,
  kMalformed,
  kMissingVideo,
  kFrameMismatch,
  kUnknownName,
  kNoData,
  kUnsupported,
  kIo,
};

const char* to_string(ErrorCode code);

// Every validation failure in the library surfaces as this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ivt
