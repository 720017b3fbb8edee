#pragma once

#include <stdexcept>
#include <string>

namespace raux {

// Every failure mode the library reports. Callers that only care about
// "something went wrong" can catch raux::Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct PoleError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct DegenerateError : Error { using Error::Error; };
struct BoundaryZeroError : Error { using Error::Error; };
struct ClusterError : Error { using Error::Error; };
struct CoverageError : Error { using Error::Error; };

}  // namespace raux
