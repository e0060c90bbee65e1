#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gradkit {

// Caller passed an argument outside the operation's domain (bad index, bad anchor).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model or solver was configured inconsistently (missing focal length, bad tolerance).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data violates an invariant (empty mask, non-unit normal, nonpositive depth).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The solver cannot handle the given reconstruction domain (e.g. spectral methods on holes).
class UnsupportedDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class IoErrorKind { open_failed, malformed_header, truncated_payload, dimension_mismatch, write_failed };

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorKind kind, std::string file, std::uint64_t offset, const std::string& what)
      : std::runtime_error(file + " @" + std::to_string(offset) + ": " + what),
        kind_(kind),
        file_(std::move(file)),
        offset_(offset) {}

  IoErrorKind kind() const noexcept { return kind_; }
  const std::string& file() const noexcept { return file_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  IoErrorKind kind_;
  std::string file_;
  std::uint64_t offset_;
};

}  // namespace gradkit
