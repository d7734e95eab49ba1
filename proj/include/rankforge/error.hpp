#pragma once

#include <stdexcept>
#include <string>

namespace rankforge {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands (matmul, hcat, qr on a wide matrix, ...).
struct DimensionError : Error {
  using Error::Error;
};

// A square matrix required to be invertible turned out not to be.
struct SingularMatrixError : Error {
  using Error::Error;
};

// An operation's stated precondition was violated by the caller.
struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace rankforge
