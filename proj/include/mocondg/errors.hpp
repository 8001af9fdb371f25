#pragma once

#include <stdexcept>
#include <string>

namespace mocondg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class UnknownProblem : public Error {
 public:
  explicit UnknownProblem(const std::string& name) : Error("unknown problem: " + name) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A solver could not reach its tolerances (ill-conditioning, iteration cap).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InfeasibleProblem : public Error {
 public:
  using Error::Error;
};

class DegenerateMatrix : public Error {
 public:
  using Error::Error;
};

class LineSearchStall : public Error {
 public:
  using Error::Error;
};

class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace mocondg
