#pragma once

#include <stdexcept>
#include <string>

namespace anisost {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct InvalidTag : Error { using Error::Error; };
struct Degenerate : Error { using Error::Error; };
struct EmptyPartition : Error { using Error::Error; };

// polynomials
struct DimensionMismatch : Error { using Error::Error; };
struct SingularMap : Error { using Error::Error; };

// quadrature
struct UnsupportedOrder : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };

// fields
struct UnknownName : Error { using Error::Error; };

// moduli
struct OutOfDomain : Error { using Error::Error; };

// approximation checks
struct SingularGram : Error { using Error::Error; };
struct DegenerateRHS : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };

// adaptive loop
struct ElementCapExceeded : Error { using Error::Error; };

// driver
struct ConfigError : Error { using Error::Error; };

}  // namespace anisost
