#pragma once

#include <Eigen/Dense>

#include "cbal/dataset.hpp"

namespace cbal {

enum class Subgroup { treated, control };
enum class Weighting { unweighted, inverse_ps, inverse_one_minus_ps, odds, custom };

struct CoefVector {
  Eigen::VectorXd beta;
  Subgroup subgroup;
  Weighting weighting;
  Eigen::Index n_used;
};

// OLS of Y on X over the subgroup. Throws RankDeficientSubgroup.
CoefVector fit_ols(const Dataset& d, Subgroup subgroup);

// Weighted least squares with explicit per-unit weights. Weights must be
// zero off-subgroup and nonnegative; rows with zero weight drop out.
// Solved via QR of the sqrt-weight-scaled design, never via normal
// equations. Throws RankDeficientSubgroup, NegativeWeight.
CoefVector fit_wls(const Dataset& d, Subgroup subgroup,
                   const Eigen::VectorXd& unit_weights,
                   Weighting weighting = Weighting::custom);

}  // namespace cbal
