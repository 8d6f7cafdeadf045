#pragma once

#include <stdexcept>
#include <string>

namespace wsos {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDegree : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Lambda(x) is not positive definite, so x is outside the barrier domain.
class NotInterior : public Error {
 public:
  using Error::Error;
};

class NotCertified : public Error {
 public:
  using Error::Error;
};

class InvalidStart : public Error {
 public:
  using Error::Error;
};

class NoCertifiableBound : public Error {
 public:
  using Error::Error;
};

class MaxIterations : public Error {
 public:
  using Error::Error;
};

class NumericFailure : public Error {
 public:
  using Error::Error;
};

class InvalidDenominator : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace wsos
