#include "pqnb/error.hpp"

namespace pqnb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownChain: return "UNKNOWN_CHAIN";
    case ErrorCode::kNoReference: return "NO_REFERENCE";
    case ErrorCode::kInvalidPolicy: return "INVALID_POLICY";
    case ErrorCode::kZeroMss: return "ZERO_MSS";
    case ErrorCode::kDoubleAcquire: return "DOUBLE_ACQUIRE";
    case ErrorCode::kNotHeld: return "NOT_HELD";
    case ErrorCode::kNonCe0Device: return "NON_CE0_DEVICE";
    case ErrorCode::kUnknownSuite: return "UNKNOWN_SUITE";
    case ErrorCode::kZeroDuration: return "ZERO_DURATION";
    case ErrorCode::kEmpty: return "EMPTY";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kMalformedResults: return "MALFORMED_RESULTS";
    case ErrorCode::kInvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::kIo: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace pqnb
