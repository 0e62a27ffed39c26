#pragma once

#include <stdexcept>
#include <string>

namespace helpdesk {

/// Base class for every failure raised by the library. Messages are single
/// line diagnostics suitable for printing verbatim by the CLI.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file or record that does not match its declared format.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Inputs that violate an operation's preconditions (shape mismatch,
/// empty corpus, category without samples, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace helpdesk
