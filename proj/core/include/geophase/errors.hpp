#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace geophase {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on surfaces (or vectors) of different basis sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration file is missing a key or holds an invalid value.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

  /// Path of the offending key, e.g. "periods[0]".
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A run would generate more events than the configured budget allows.
class ResourceError : public Error {
 public:
  ResourceError(std::uint64_t event_count, std::uint64_t limit)
      : Error("projected event count " + std::to_string(event_count) +
              " exceeds limit " + std::to_string(limit)),
        event_count_(event_count),
        limit_(limit) {}

  std::uint64_t event_count() const noexcept { return event_count_; }
  std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t event_count_;
  std::uint64_t limit_;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace geophase
