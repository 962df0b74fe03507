#pragma once

#include <Eigen/Dense>
#include <string>

#include "cbal/dataset.hpp"

namespace cbal {

enum class PSMethod { mle, ipt_treated, ipt_control, cbps_ate, cbps_att };

const char* to_string(PSMethod m);

struct SolverConfig {
  double tol = 1e-9;        // max-norm target for the average-scaled moments
  int max_iter = 200;
  double line_search_shrink = 0.5;
};

struct PSFit {
  PSMethod method;
  Eigen::VectorXd gamma;
  Eigen::VectorXd fitted;  // p_i = logistic(X_i gamma), strictly inside (0,1)
  double moment_residual_norm;
  int iterations;
};

// Logit MLE via Newton on the average negative log-likelihood.
// Throws Separation, NoConvergence.
PSFit fit_mle(const Dataset& d, const SolverConfig& cfg = {});

// Balancing fits. Each system is the stationarity condition of a strictly
// convex potential in gamma (logistic link), minimized by damped Newton.
// Throws Infeasible, NoConvergence.
PSFit fit_ipt_treated(const Dataset& d, const SolverConfig& cfg = {});
PSFit fit_ipt_control(const Dataset& d, const SolverConfig& cfg = {});
PSFit fit_cbps_ate(const Dataset& d, const SolverConfig& cfg = {});
PSFit fit_cbps_att(const Dataset& d, const SolverConfig& cfg = {});

PSFit fit_ps(const Dataset& d, PSMethod method, const SolverConfig& cfg = {});

// Re-evaluates the defining moment system of fit.method at fit.gamma,
// average-scaled. Throws MethodMismatch if dimensions disagree.
Eigen::VectorXd moment_residual(const PSFit& fit, const Dataset& d);

namespace detail {
// Value and gradient of the convex potential whose stationarity condition
// is the balancing moment system of `method` (not defined for mle).
// Exposed for the finite-difference consistency tests.
double potential_value(const Dataset& d, PSMethod method, const Eigen::VectorXd& gamma);
Eigen::VectorXd potential_gradient(const Dataset& d, PSMethod method,
                                   const Eigen::VectorXd& gamma);
}  // namespace detail

}  // namespace cbal
