#pragma once

#include <stdexcept>
#include <string>

namespace qwoa {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration. Maps to CLI exit code 2.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Filesystem failures. Maps to CLI exit code 4.
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed, truncated, or checksum-mismatched files.
class FormatError : public IoError {
public:
  using IoError::IoError;
};

/// Problem size exceeds the configured memory cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

} // namespace qwoa
