#pragma once

#include <stdexcept>
#include <string>

namespace cvlink {

/// Requested target cannot be met for physical reasons (e.g. a squeezing
/// landmark below the loss-limited bound). CLI exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration / input text problem. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { parse, unknown_key, conflict, range, missing };

  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Filesystem failure while reading inputs or writing artifacts. CLI exit
/// code 4.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cvlink
