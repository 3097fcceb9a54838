#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace cake {

enum class ErrorKind {
  InvalidInput,
  InvalidConfig,
  Transport,    // connection/timeout/5xx, retryable
  RateLimit,    // HTTP 429, retryable
  HttpStatus,   // other 4xx, never retried
  Protocol,     // malformed payload
  EmptyResponse,
  InsufficientCorpus,
  Parse,
  DuplicateId,
  Validation,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  bool retryable() const noexcept {
    return kind_ == ErrorKind::Transport || kind_ == ErrorKind::RateLimit;
  }
  bool provider_failure() const noexcept;

  // Seconds from a Retry-After hint, if the server sent one.
  std::optional<double> retry_after() const noexcept { return retry_after_; }
  Error& with_retry_after(double seconds) {
    retry_after_ = seconds;
    return *this;
  }

 private:
  ErrorKind kind_;
  std::optional<double> retry_after_;
};

}  // namespace cake
