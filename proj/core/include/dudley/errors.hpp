#pragma once

#include <stdexcept>
#include <string>

namespace dudley {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different ambient dimensions.
class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

/// A precondition on an argument value failed (zero vector, eps < 0, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The body does not satisfy the unit-ball / radius-d sandwich hypothesis.
class SandwichViolation : public Error {
 public:
  SandwichViolation(double inradius, double circumradius, std::size_t dim)
      : Error("sandwich hypothesis violated in dimension " + std::to_string(dim) +
              ": inradius " + std::to_string(inradius) + " (need >= 1), circumradius " +
              std::to_string(circumradius) + " (need <= " + std::to_string(dim) + ")"),
        inradius_(inradius),
        circumradius_(circumradius) {}

  double inradius() const { return inradius_; }
  double circumradius() const { return circumradius_; }

 private:
  double inradius_;
  double circumradius_;
};

/// An H-polytope that was required to be bounded is not.
class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// An H-polytope that was required to be nonempty is empty.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace dudley
