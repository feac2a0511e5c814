#pragma once

#include <stdexcept>
#include <string>

namespace qfl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input matrix breaks the structural identity of its tag.
class StructureViolation : public Error {
 public:
  StructureViolation(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// The vectorized Lyapunov operator is singular: the semigroup has more than
// one stationary covariance.
class NonUniqueStationary : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class WordTooLong : public Error {
 public:
  using Error::Error;
};

class NotPsd : public Error {
 public:
  using Error::Error;
};

class UnsupportedIso : public Error {
 public:
  using Error::Error;
};

}  // namespace qfl
