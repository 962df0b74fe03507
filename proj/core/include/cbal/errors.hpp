#pragma once

#include <stdexcept>
#include <string>

namespace cbal {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dataset construction / validation.
struct LengthMismatch : Error {
  using Error::Error;
};
struct RankDeficient : Error {
  using Error::Error;
};
struct DegenerateTreatment : Error {
  using Error::Error;
};
struct EmptyPopulation : Error {
  using Error::Error;
};

// Propensity-score solvers.
struct Separation : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct Infeasible : Error {
  using Error::Error;
};
struct MethodMismatch : Error {
  using Error::Error;
};

// Outcome regression.
struct RankDeficientSubgroup : Error {
  using Error::Error;
};
struct NegativeWeight : Error {
  using Error::Error;
};

// Effect estimators.
struct FittedProbabilityOutOfRange : Error {
  using Error::Error;
};
struct DenominatorNearZero : Error {
  using Error::Error;
};

// Synthetic data generation.
struct DegenerateDraw : Error {
  using Error::Error;
};

}  // namespace cbal
