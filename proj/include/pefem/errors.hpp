/// \file errors.hpp
/// \brief Exception types thrown by the library.

#ifndef PEFEM_ERRORS_HPP
#define PEFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pefem {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A closest-point projection onto the exact boundary could not be completed.
class ProjectionFailure : public Error {
 public:
  using Error::Error;
};

/// Newton iteration for the projection did not meet its residual tolerance.
class NoConvergence : public ProjectionFailure {
 public:
  using ProjectionFailure::ProjectionFailure;
};

/// Two candidate projections are equidistant but far apart in parameter.
class AmbiguousProjection : public ProjectionFailure {
 public:
  using ProjectionFailure::ProjectionFailure;
};

/// A generated or refined mesh violates the minimum-angle requirement.
class QualityFailure : public Error {
 public:
  using Error::Error;
};

/// Element affine map is (numerically) singular.
class SingularElement : public Error {
 public:
  using Error::Error;
};

/// Requested quadrature exactness exceeds what the library ships.
class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

/// Rate fit has fewer than the required number of usable data points.
class InsufficientResolution : public Error {
 public:
  using Error::Error;
};

/// Linear system is singular or the iterative solver stagnated.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Error norms were requested but no manufactured solution is attached.
class MissingExact : public Error {
 public:
  using Error::Error;
};

/// All errors are at rounding level; estimated orders are meaningless.
class DegenerateErrors : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or command line.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pefem

#endif  // PEFEM_ERRORS_HPP
