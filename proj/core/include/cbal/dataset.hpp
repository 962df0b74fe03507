#pragma once

#include <Eigen/Dense>
#include <optional>

#include "cbal/errors.hpp"

namespace cbal {

enum class Population { all, treated, control, z1, z0 };

// Rectangular sample consumed by every solver and estimator.
// Covariates always carry a leading intercept column; treatment and
// instrument are stored as exact 0/1 integers.
class Dataset {
 public:
  // Prepends the intercept to `raw_covariates` and validates.
  // Throws LengthMismatch, RankDeficient, DegenerateTreatment.
  static Dataset build(const Eigen::MatrixXd& raw_covariates,
                       const Eigen::VectorXi& treatment,
                       const Eigen::VectorXd& outcome,
                       std::optional<Eigen::VectorXi> instrument = std::nullopt);

  Eigen::Index n() const { return covariates_.rows(); }
  Eigen::Index k() const { return covariates_.cols(); }
  Eigen::Index n_treated() const { return n_treated_; }
  Eigen::Index n_control() const { return n() - n_treated_; }

  const Eigen::MatrixXd& covariates() const { return covariates_; }
  const Eigen::VectorXi& treatment() const { return treatment_; }
  const Eigen::VectorXd& outcome() const { return outcome_; }
  bool has_instrument() const { return instrument_.has_value(); }
  const Eigen::VectorXi& instrument() const { return *instrument_; }

  // Same covariates/treatment/instrument, different outcome vector.
  Dataset with_outcome(const Eigen::VectorXd& outcome) const;

  // Instrument takes over the treatment role; no instrument in the result.
  // Used by the LATE/LATT ratio constructions.
  Dataset instrument_as_treatment(const Eigen::VectorXd& outcome) const;

 private:
  Dataset() = default;

  Eigen::MatrixXd covariates_;
  Eigen::VectorXi treatment_;
  Eigen::VectorXd outcome_;
  std::optional<Eigen::VectorXi> instrument_;
  Eigen::Index n_treated_ = 0;
};

struct MeanVector {
  Eigen::VectorXd values;
  Population population;
};

// Arithmetic mean of covariate rows over the selected population.
// Throws EmptyPopulation.
MeanVector mean_covariates(const Dataset& d, Population population);

}  // namespace cbal
