#pragma once

#include <stdexcept>
#include <string>

namespace cje {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter is outside the domain of the law or operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Evaluation point outside the domain (e.g. |z| >= 1 for a disk density).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A deformed coefficient equals 1 where the phase factor is undefined.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// A Gamma argument hits a pole, or a rational function is evaluated at a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Ill-conditioned input (nearly coincident atoms, broken unitarity).
class NumericError : public Error {
 public:
  using Error::Error;
};

// The eigensolver did not converge within its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// e_1 is (numerically) not a cyclic vector: some spectral weight vanished.
class NonCyclicError : public Error {
 public:
  using Error::Error;
};

}  // namespace cje
