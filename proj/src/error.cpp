#include "cakeforge/error.hpp"

namespace cake {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::InvalidConfig: return "invalid config";
    case ErrorKind::Transport: return "transport failure";
    case ErrorKind::RateLimit: return "rate limited";
    case ErrorKind::HttpStatus: return "http error";
    case ErrorKind::Protocol: return "protocol error";
    case ErrorKind::EmptyResponse: return "empty response";
    case ErrorKind::InsufficientCorpus: return "insufficient corpus";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::DuplicateId: return "duplicate id";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

bool Error::provider_failure() const noexcept {
  switch (kind_) {
    case ErrorKind::Transport:
    case ErrorKind::RateLimit:
    case ErrorKind::HttpStatus:
    case ErrorKind::Protocol:
    case ErrorKind::EmptyResponse:
      return true;
    default:
      return false;
  }
}

}  // namespace cake
