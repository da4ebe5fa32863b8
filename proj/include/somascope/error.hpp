#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace somascope {

/// Base for every error the library raises on bad input or configuration.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: empty term file, inverted thresholds, bad flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file content. Carries the 1-based line when known.
class ParseError : public Error {
 public:
  ParseError(const std::string &source, std::size_t line, const std::string &what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input is well-formed but cannot support the requested computation.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace somascope
