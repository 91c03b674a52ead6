#pragma once

#include <stdexcept>
#include <string>

namespace ssdam {

/// Equivalent stress too small for a stress-state quantity or gradient.
struct DegenerateStressError : std::domain_error {
  explicit DegenerateStressError(const std::string& what)
      : std::domain_error(what) {}
};

/// |sin 3theta| below the Lode singularity guard; the raw Lode-parameter
/// gradient is undefined there. Callers use the smoothed product form.
struct NearSingularLodeError : std::domain_error {
  explicit NearSingularLodeError(const std::string& what)
      : std::domain_error(what) {}
};

/// hD >= 1: the damaged stiffness has vanished.
struct SaturatedDamageError : std::domain_error {
  explicit SaturatedDamageError(const std::string& what)
      : std::domain_error(what) {}
};

/// An iterative solve exceeded its iteration budget.
struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(const std::string& what, double residual_in)
      : std::runtime_error(what), residual(residual_in) {}
  double residual;
};

struct InvalidArgumentError : std::invalid_argument {
  explicit InvalidArgumentError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace ssdam
