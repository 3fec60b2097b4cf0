#pragma once

#include <stdexcept>
#include <string>

namespace predictive {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NormalizationError : Error { using Error::Error; };
struct SpaceMismatch : Error { using Error::Error; };
struct ConditioningError : Error { using Error::Error; };
struct PartitionCoverageError : Error { using Error::Error; };
struct KernelBaseError : Error { using Error::Error; };
struct ParamError : Error { using Error::Error; };
struct NonAtomicityError : Error { using Error::Error; };
struct SupportError : Error { using Error::Error; };
struct NumericalDriftError : Error { using Error::Error; };
struct DominationError : Error { using Error::Error; };
struct HorizonError : Error { using Error::Error; };
struct EnumerationBudgetError : Error { using Error::Error; };
struct SampleSizeError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// Quadrature failed to reach the requested tolerance; carries the best
// residual estimate the integrator produced.
struct IntegrationError : Error {
  IntegrationError(const std::string& what, double residual_estimate)
      : Error(what), residual(residual_estimate) {}
  double residual;
};

}  // namespace predictive
