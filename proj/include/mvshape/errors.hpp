#pragma once

#include <stdexcept>
#include <string>

namespace mvshape {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/** Argument outside the domain of an operation (e.g. t outside [0,1]). */
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/** Operands with incompatible p or M. */
class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

/** Input that carries no usable geometry (zero perimeter, zero norm, ...). */
class DegenerateError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate"; }
};

/** Least-squares smoothing could not be carried out. */
class FitError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "fit"; }
};

/** Malformed or inconsistent input data (files, labels, datasets). */
class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data"; }
};

/** A numerical procedure broke down (antipodal point, invariant violation). */
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

}  // namespace mvshape
