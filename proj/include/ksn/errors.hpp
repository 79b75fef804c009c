#pragma once

#include <stdexcept>
#include <string>

namespace ksn {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An input lies outside the domain of the function being evaluated
// (phi's interval, the unit cube, sigma_inv's open range).
struct DomainError : Error {
  using Error::Error;
};

// Invalid argument combinations that are not data-dependent (d < 2,
// lambda = 0, rational mode with a float-only phi, ...).
struct ArgumentError : Error {
  using Error::Error;
};

// Float-mode value grouping found a consecutive gap inside the ambiguity
// band (tolerance, 10*tolerance): the grouping cannot be trusted.
struct GroupingAmbiguity : Error {
  GroupingAmbiguity(int block, double gap, double tolerance)
      : Error("grouping ambiguity in block " + std::to_string(block) +
              ": gap " + std::to_string(gap) + " lies in (tol, 10*tol) with tol " +
              std::to_string(tolerance)),
        block(block), gap(gap), tolerance(tolerance) {}
  int block;
  double gap;
  double tolerance;
};

struct SizeError : Error {
  using Error::Error;
};

// A supplied annihilation witness does not satisfy Eq-style group sums.
struct InvalidWitness : Error {
  using Error::Error;
};

// Malformed dataset or network file; message carries line/field diagnostics.
struct FormatError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace ksn
