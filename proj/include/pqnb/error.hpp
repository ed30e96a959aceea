#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pqnb {

enum class ErrorCode {
  kUnknownChain,
  kNoReference,
  kInvalidPolicy,
  kZeroMss,
  kDoubleAcquire,
  kNotHeld,
  kNonCe0Device,
  kUnknownSuite,
  kZeroDuration,
  kEmpty,
  kInfeasible,
  kMalformedResults,
  kInvalidConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure inside the simulator surfaces as this exception; the C API
// maps the code onto a pqnb_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Configuration error tied to a named field, e.g. "channel.ul_rate_bps".
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(ErrorCode::kInvalidConfig, field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace pqnb
