#pragma once

#include <stdexcept>
#include <string>

namespace hybrid_stab {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector field or controller produced NaN/Inf.
class NonFiniteOutput : public Error {
 public:
  using Error::Error;
};

/// The input gain f2(x1, x2) vanished, violating the plant class assumption.
class F2Zero : public Error {
 public:
  using Error::Error;
};

/// theta outside (0, theta1), where the level constant c_ell is undefined.
class ThetaOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Sampling domain is empty after exclusions.
class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

/// Bisection endpoints do not bracket a verdict change.
class NoBracket : public Error {
 public:
  using Error::Error;
};

}  // namespace hybrid_stab
