#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace snmine {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input text or files during corpus ingestion.
class IngestError : public Error {
 public:
  using Error::Error;
};

class InvalidUtf8Error : public Error {
 public:
  explicit InvalidUtf8Error(std::size_t offset)
      : Error("invalid UTF-8 at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class InvalidTermError : public Error {
 public:
  using Error::Error;
};

// Two arguments that must name distinct terms or actors were equal.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

class EmptySpaceError : public Error {
 public:
  using Error::Error;
};

// Counts that violate n_xy <= min(n_x, n_y) <= max(n_x, n_y) <= N, or a
// measure evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed snapshot, fixture, cache, actors or attributes file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Failures raised by a hit source. Always carries the canonical query.
class SourceError : public Error {
 public:
  SourceError(std::string query, const std::string& what)
      : Error(what + " [query: " + query + "]"), query_(std::move(query)) {}
  const std::string& query() const noexcept { return query_; }

 private:
  std::string query_;
};

class MissingFixtureError : public SourceError {
 public:
  explicit MissingFixtureError(std::string query)
      : SourceError(std::move(query), "query not present in fixture") {}
};

// Transport failure that persisted after the configured retries.
class RetryableError : public SourceError {
 public:
  using SourceError::SourceError;
};

class RateLimitError : public SourceError {
 public:
  using SourceError::SourceError;
};

class ProtocolError : public SourceError {
 public:
  using SourceError::SourceError;
};

}  // namespace snmine
