#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace percept {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed interchange file. Carries the file, byte offset (or line for
/// text formats) and the rule that was violated.
class FormatError : public Error {
 public:
  FormatError(std::string file, std::uint64_t offset, std::string rule)
      : Error(file + " @ offset " + std::to_string(offset) + ": " + rule),
        file_(std::move(file)),
        offset_(offset),
        rule_(std::move(rule)) {}

  const std::string& file() const noexcept { return file_; }
  std::uint64_t offset() const noexcept { return offset_; }
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string file_;
  std::uint64_t offset_;
  std::string rule_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Inputs that are well-formed but inconsistent (dimension mismatch, unknown class).
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidDetection : public InputError {
 public:
  using InputError::InputError;
};

class InvalidLabel : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace percept
