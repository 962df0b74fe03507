#pragma once

#include <map>
#include <string>
#include <vector>

#include "cbal/dataset.hpp"
#include "cbal/estimators.hpp"
#include "cbal/ps_solvers.hpp"

namespace cbal {

struct BalanceRow {
  std::string covariate;  // "x1" (intercept), "x2", ...
  double unweighted_treated_mean;
  double unweighted_control_mean;
  double weighted_treated_mean;
  double weighted_control_mean;
  double target_mean;
};

// Balance table plus the exact weight-sum / balance identities the fitted
// methods imply. Identities that do not apply to the method are omitted
// from identity_residuals.
struct BalanceReport {
  std::string ps_method;
  std::vector<BalanceRow> rows;
  double treated_weight_sum;
  double control_weight_sum;
  double expected_treated_weight_sum;
  double expected_control_weight_sum;
  std::map<std::string, double> identity_residuals;
};

struct AuditReport {
  Estimand estimand;
  std::string ps_method;
  std::map<std::string, double> estimates;  // estimator tag -> value
  double max_pairwise_gap;
  bool expected_equivalent;
};

// fit1 weights the treated side, fit0 the control side (same fit twice for
// single-parameter methods). For cbps_att pass the fit in both slots.
BalanceReport balance_report(const Dataset& d, const PSFit& fit1, const PSFit& fit0);

// Runs every applicable estimator of the estimand with the named weighting
// and reports all values. ps_method: ipt_treated/ipt_control both mean the
// IPT pair for ate/late; cbps_att drives att/latt.
AuditReport equivalence_audit(const Dataset& d, Estimand estimand, PSMethod ps_method,
                              const SolverConfig& cfg = {});

}  // namespace cbal
