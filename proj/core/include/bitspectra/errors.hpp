#pragma once

#include <stdexcept>
#include <string>

namespace bitspectra {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition on an argument violated (lag out of range, empty input, bad bounds).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input larger than a configured cap (file max_bits, kernel caps).
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Floating-point route drifted past its tolerance; callers may fall back to an exact kernel.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

// A required external tool or library feature is missing.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

// Two routes that must agree did not. Always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bitspectra
