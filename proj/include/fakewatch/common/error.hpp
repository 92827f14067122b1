#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fakewatch {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kFormat,
  kEmptyInput,
  kConflict,
  kState,
  kAuthorization,
  kAuthentication,
  kNotFound,
  kProtocol,
  kTransport,
  kSize,
  kDivergence,
  kCompatibility,
  kIntegrity,
  kMigration,
  kEmptyVocabulary,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure that knows where in the input it happened.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long long byte_offset)
      : Error(ErrorCode::kParse, message + " (at byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  long long byte_offset() const noexcept { return byte_offset_; }

 private:
  long long byte_offset_;
};

}  // namespace fakewatch
