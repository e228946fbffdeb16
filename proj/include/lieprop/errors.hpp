#pragma once

#include <stdexcept>
#include <string>

namespace lieprop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: index out of range, non-unit axis, malformed table, ...
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The transverse radius z = sqrt(a1^2 + a2^2) fell below epsilon, so the
/// azimuthal angle of the two-angle factorization is undefined.
class DegenerateAxis : public Error {
 public:
  using Error::Error;
};

/// a3 <= 0 on an SU(1,1) branch that requires a3 > 0.
class SignViolation : public Error {
 public:
  using Error::Error;
};

/// Middle angle of a three-axis decomposition sits at a singular value.
class GimbalLock : public Error {
 public:
  using Error::Error;
};

/// Integration produced NaN or Inf.
class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Operation requested for a branch it does not cover.
class BranchMismatch : public Error {
 public:
  using Error::Error;
};

/// A 2x2 matrix whose adjoint action does not close on the algebra.
class NotInGroup : public Error {
 public:
  using Error::Error;
};

/// Evaluation time outside a tabulated field's range.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

}  // namespace lieprop
