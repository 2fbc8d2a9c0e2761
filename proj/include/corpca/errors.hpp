#pragma once

#include <stdexcept>
#include <string>

namespace corpca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Column set of a supposed basis matrix is not orthonormal.
class BasisError : public Error {
 public:
  using Error::Error;
};

/// The sin-theta bound does not apply: the eigen-gap minus the perturbation is not positive.
class GapError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class OrderError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// The ambient dimension cannot hold the requested support schedule.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A support schedule violates one of the persistence / disjointness conditions.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

class PsdError : public Error {
 public:
  using Error::Error;
};

/// No eigenvalue of the empirical covariance exceeds the retention threshold.
class EmptySubspaceError : public Error {
 public:
  using Error::Error;
};

/// The leading eigenvalue of a deflated block is already below the zero threshold.
class NoClusterError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class NonTerminationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace corpca
