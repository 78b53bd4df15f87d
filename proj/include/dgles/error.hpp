#pragma once

#include <stdexcept>
#include <string>

namespace dgles {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

class DegenerateElement : public Error {
public:
  using Error::Error;
};

/// Nonpositive density or temperature at a quadrature node.
class PositivityViolation : public Error {
public:
  PositivityViolation(const std::string& what, long element = -1)
      : Error(what), element_(element) {}
  long element() const noexcept { return element_; }

private:
  long element_;
};

/// NaN/Inf detected in the residual.
class NumericalBlowup : public Error {
public:
  NumericalBlowup(const std::string& what, long element = -1)
      : Error(what), element_(element) {}
  long element() const noexcept { return element_; }

private:
  long element_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class NotReady : public Error {
public:
  using Error::Error;
};

}  // namespace dgles
