#include "fakewatch/common/error.hpp"

namespace fakewatch {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kState: return "state";
    case ErrorCode::kAuthorization: return "authorization";
    case ErrorCode::kAuthentication: return "authentication";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kTransport: return "transport";
    case ErrorCode::kSize: return "size";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kCompatibility: return "compatibility";
    case ErrorCode::kIntegrity: return "integrity";
    case ErrorCode::kMigration: return "migration";
    case ErrorCode::kEmptyVocabulary: return "empty_vocabulary";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace fakewatch
