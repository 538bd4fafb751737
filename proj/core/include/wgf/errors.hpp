#ifndef WGF_ERRORS_HPP
#define WGF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wgf {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A field does not conform to the grid it is used with.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A model was evaluated outside its domain (e.g. log at zero density).
/// `index` is the offending cell, or -1 when not cell-specific.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, long index = -1)
      : Error(what), index(index) {}
  long index;
};

/// An iterative sub-solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

/// The constrained projection problem has no feasible point.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

}  // namespace wgf

#endif  // WGF_ERRORS_HPP
