#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfgprint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A file or directory that cannot be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed MiniProc source. Carries the 1-based line of the offending token.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t line, const std::string &message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// An index file or record whose configuration stamp does not match.
class IncompatibleIndex : public Error {
public:
  using Error::Error;
};

/// An index file that cannot be parsed.
class IndexFormatError : public Error {
public:
  IndexFormatError(std::size_t line, const std::string &message)
      : Error("index line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

} // namespace cfgprint
