#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace concentric {

// Base for every error raised by the toolkit. Catch this at the CLI boundary.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// g^2 > 1: no confined Gaussian mode.
class UnstableGeometry : public Error {
  public:
    using Error::Error;
};

// g = -1 exactly (or g = +1): waist and mode volume are undefined.
class SingularGeometry : public Error {
  public:
    using Error::Error;
};

class NoRoot : public Error {
  public:
    using Error::Error;
};

class DegenerateInput : public Error {
  public:
    using Error::Error;
};

// Loss budget inputs that imply a negative absorption loss.
class InconsistentInputs : public Error {
  public:
    using Error::Error;
};

class DegenerateData : public Error {
  public:
    using Error::Error;
};

class SingularJacobian : public Error {
  public:
    using Error::Error;
};

class UnidentifiableLifetime : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

// Malformed data file. line() is 1-based; 0 when the error is not tied to a row.
class DataError : public Error {
  public:
    DataError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace concentric
