#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vponset {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on caller-supplied data or configuration was violated.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Analysis was asked to run on an empty signal.
class EmptyInputError : public ValidationError
{
public:
  EmptyInputError() : ValidationError("empty input: audio buffer has no samples") {}
};

/// A file could not be opened or read.
class IoError : public Error
{
public:
  using Error::Error;
};

/// A file was readable but its contents are malformed or unsupported.
class FormatError : public Error
{
public:
  using Error::Error;
};

/// A text line could not be parsed. `line()` is 1-based.
class ParseError : public FormatError
{
public:
  ParseError(std::size_t line, const std::string& what)
      : FormatError("line " + std::to_string(line) + ": " + what), mLine(line)
  {}

  std::size_t line() const noexcept { return mLine; }

private:
  std::size_t mLine;
};

} // namespace vponset
