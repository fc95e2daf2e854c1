#include "ivteval/error.hpp"

namespace ivt {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDuplicateId: return "duplicate-id";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kCountMismatch: return "count-mismatch";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kNonBinary: return "non-binary";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kMissingVideo: return "missing-video";
    case ErrorCode::kFrameMismatch: return "frame-mismatch";
    case ErrorCode::kUnknownName: return "unknown-name";
    case ErrorCode::kNoData: return "no-data";
    case ErrorCode::kUnsupported: return "unsupported";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace ivt
