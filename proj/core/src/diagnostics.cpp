#include "cbal/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace cbal {

namespace {

Eigen::VectorXd masked_sum(const Dataset& d, const Eigen::VectorXd& w) {
  return d.covariates().transpose() * w;
}

std::string pair_label(const PSFit& fit1, const PSFit& fit0) {
  if (fit1.method == fit0.method) return to_string(fit1.method);
  return std::string(to_string(fit1.method)) + "+" + to_string(fit0.method);
}

}  // namespace

BalanceReport balance_report(const Dataset& d, const PSFit& fit1, const PSFit& fit0) {
  const Eigen::Index n = d.n();
  const Eigen::Index k = d.k();
  const double nn = static_cast<double>(n);
  const double n1 = static_cast<double>(d.n_treated());

  const Eigen::VectorXd xbar = mean_covariates(d, Population::all).values;
  const Eigen::VectorXd x1bar = mean_covariates(d, Population::treated).values;
  const Eigen::VectorXd x0bar = mean_covariates(d, Population::control).values;

  const bool att_style = fit1.method == PSMethod::cbps_att;

  // Per-unit weights on each arm, zero off-arm.
  Eigen::VectorXd w1 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w0 = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d.treatment()[i] == 1) {
      w1[i] = att_style ? 1.0 : 1.0 / fit1.fitted[i];
    } else {
      w0[i] = att_style ? fit0.fitted[i] / (1.0 - fit0.fitted[i])
                        : 1.0 / (1.0 - fit0.fitted[i]);
    }
  }
  const double sum1 = w1.sum();
  const double sum0 = w0.sum();
  const double denom = att_style ? n1 : nn;

  const Eigen::VectorXd wmean1 = masked_sum(d, w1) / denom;
  const Eigen::VectorXd wmean0 = masked_sum(d, w0) / denom;
  const Eigen::VectorXd target = att_style ? x1bar : xbar;

  BalanceReport rep;
  rep.ps_method = pair_label(fit1, fit0);
  rep.treated_weight_sum = sum1;
  rep.control_weight_sum = sum0;
  rep.expected_treated_weight_sum = att_style ? n1 : nn;
  rep.expected_control_weight_sum = att_style ? n1 : nn;
  for (Eigen::Index j = 0; j < k; ++j) {
    rep.rows.push_back(BalanceRow{j == 0 ? "intercept" : "x" + std::to_string(j),
                                  x1bar[j], x0bar[j],
                                  wmean1[j], wmean0[j], target[j]});
  }

  auto& res = rep.identity_residuals;
  if (att_style) {
    res["att_balance"] = (wmean0 - target).cwiseAbs().maxCoeff();
    res["att_count"] = std::abs(sum0 - n1);
  } else {
    res["balance_treated"] = (wmean1 - target).cwiseAbs().maxCoeff();
    res["balance_control"] = (wmean0 - target).cwiseAbs().maxCoeff();
    if (fit1.method == PSMethod::ipt_treated) {
      res["treated_weight_sum"] = std::abs(sum1 - nn);
    }
    if (fit0.method == PSMethod::ipt_control) {
      res["control_weight_sum"] = std::abs(sum0 - nn);
    }
    if (fit1.method == PSMethod::cbps_ate) {
      res["weight_sum_equality"] = std::abs(sum1 - sum0);
    }
    if (fit1.method == PSMethod::mle) {
      Eigen::VectorXd score = Eigen::VectorXd::Zero(k);
      for (Eigen::Index i = 0; i < n; ++i) {
        score += (d.treatment()[i] - fit1.fitted[i]) * d.covariates().row(i).transpose();
      }
      res["score_orthogonality"] = (score / nn).cwiseAbs().maxCoeff();
    }
  }
  return rep;
}

AuditReport equivalence_audit(const Dataset& d, Estimand estimand, PSMethod ps_method,
                              const SolverConfig& cfg) {
  const bool ipt_pair =
      ps_method == PSMethod::ipt_treated || ps_method == PSMethod::ipt_control;

  AuditReport rep;
  rep.estimand = estimand;

  const Estimator all[] = {Estimator::ipw, Estimator::nipw, Estimator::aipw,
                           Estimator::naipw, Estimator::ipwra};

  switch (estimand) {
    case Estimand::ate: {
      const PSFit fit1 = ipt_pair ? fit_ipt_treated(d, cfg) : fit_ps(d, ps_method, cfg);
      const PSFit fit0 = ipt_pair ? fit_ipt_control(d, cfg) : fit1;
      const CoefVector b1 = fit_ols(d, Subgroup::treated);
      const CoefVector b0 = fit_ols(d, Subgroup::control);
      rep.ps_method = pair_label(fit1, fit0);
      rep.estimates["ipw"] = ipw_ate(d, fit1, fit0, false).value;
      rep.estimates["nipw"] = ipw_ate(d, fit1, fit0, true).value;
      rep.estimates["aipw"] = aipw_ate(d, fit1, fit0, b1, b0, false).value;
      rep.estimates["naipw"] = aipw_ate(d, fit1, fit0, b1, b0, true).value;
      rep.estimates["ipwra"] = ipwra_ate(d, fit1, fit0).value;
      rep.expected_equivalent = ipt_pair;
      break;
    }
    case Estimand::att: {
      const PSFit fit = fit_ps(d, ps_method, cfg);
      const CoefVector b0 = fit_ols(d, Subgroup::control);
      rep.ps_method = to_string(fit.method);
      for (Estimator e : all) {
        rep.estimates[to_string(e)] = att_components(d, fit, e, b0).value;
      }
      rep.expected_equivalent = ps_method == PSMethod::cbps_att;
      break;
    }
    case Estimand::late: {
      for (Estimator e : all) {
        const EffectEstimate est = late(d, ps_method, e, cfg);
        rep.ps_method = est.ps_method;
        rep.estimates[to_string(e)] = est.value;
      }
      rep.expected_equivalent = ipt_pair;
      break;
    }
    case Estimand::latt: {
      for (Estimator e : all) {
        const EffectEstimate est = latt(d, e, cfg);
        rep.ps_method = est.ps_method;
        rep.estimates[to_string(e)] = est.value;
      }
      rep.expected_equivalent = true;
      break;
    }
  }

  double lo = rep.estimates.begin()->second, hi = lo;
  for (const auto& [tag, v] : rep.estimates) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  rep.max_pairwise_gap = hi - lo;
  return rep;
}

}  // namespace cbal
