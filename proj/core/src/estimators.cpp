#include "cbal/estimators.hpp"

#include <cmath>

namespace cbal {

const char* to_string(Estimand e) {
  switch (e) {
    case Estimand::ate: return "ate";
    case Estimand::att: return "att";
    case Estimand::late: return "late";
    case Estimand::latt: return "latt";
  }
  return "?";
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::ipw: return "ipw";
    case Estimator::nipw: return "nipw";
    case Estimator::aipw: return "aipw";
    case Estimator::naipw: return "naipw";
    case Estimator::ipwra: return "ipwra";
  }
  return "?";
}

namespace {

std::string pair_label(const PSFit& fit1, const PSFit& fit0) {
  if (fit1.method == fit0.method) return to_string(fit1.method);
  return std::string(to_string(fit1.method)) + "+" + to_string(fit0.method);
}

void check_ate_fits(const Dataset& d, const PSFit& fit1, const PSFit& fit0) {
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i] == 1 && fit1.fitted[i] <= 0.0) {
      throw FittedProbabilityOutOfRange("fitted probability 0 on a treated unit");
    }
    if (d.treatment()[i] == 0 && fit0.fitted[i] >= 1.0) {
      throw FittedProbabilityOutOfRange("fitted probability 1 on a control unit");
    }
  }
}

// Inverse-probability weights for the two ATE terms; zero off-arm.
Eigen::VectorXd ate_weights1(const Dataset& d, const PSFit& fit1) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i] == 1) w[i] = 1.0 / fit1.fitted[i];
  }
  return w;
}

Eigen::VectorXd ate_weights0(const Dataset& d, const PSFit& fit0) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i] == 0) w[i] = 1.0 / (1.0 - fit0.fitted[i]);
  }
  return w;
}

// Odds-weights on the control arm for the ATT term.
Eigen::VectorXd att_odds_weights(const Dataset& d, const PSFit& fit) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i] == 0) {
      if (fit.fitted[i] >= 1.0) {
        throw FittedProbabilityOutOfRange("fitted probability 1 on a control unit");
      }
      w[i] = fit.fitted[i] / (1.0 - fit.fitted[i]);
    }
  }
  return w;
}

}  // namespace

EffectEstimate ipw_ate(const Dataset& d, const PSFit& fit1, const PSFit& fit0,
                       bool normalize) {
  check_ate_fits(d, fit1, fit0);
  const Eigen::VectorXd w1 = ate_weights1(d, fit1);
  const Eigen::VectorXd w0 = ate_weights0(d, fit0);
  const double nn = static_cast<double>(d.n());
  const double d1 = normalize ? w1.sum() : nn;
  const double d0 = normalize ? w0.sum() : nn;
  const double mu1 = w1.dot(d.outcome()) / d1;
  const double mu0 = w0.dot(d.outcome()) / d0;
  return EffectEstimate{Estimand::ate, normalize ? Estimator::nipw : Estimator::ipw,
                        pair_label(fit1, fit0), mu1 - mu0, mu1, mu0};
}

EffectEstimate aipw_ate(const Dataset& d, const PSFit& fit1, const PSFit& fit0,
                        const CoefVector& beta1, const CoefVector& beta0,
                        bool normalize) {
  check_ate_fits(d, fit1, fit0);
  const Eigen::VectorXd w1 = ate_weights1(d, fit1);
  const Eigen::VectorXd w0 = ate_weights0(d, fit0);
  const Eigen::VectorXd yhat1 = d.covariates() * beta1.beta;
  const Eigen::VectorXd yhat0 = d.covariates() * beta0.beta;
  const double nn = static_cast<double>(d.n());
  const double d1 = normalize ? w1.sum() : nn;
  const double d0 = normalize ? w0.sum() : nn;
  const double mu1 = w1.dot(d.outcome() - yhat1) / d1 + yhat1.mean();
  const double mu0 = w0.dot(d.outcome() - yhat0) / d0 + yhat0.mean();
  return EffectEstimate{Estimand::ate, normalize ? Estimator::naipw : Estimator::aipw,
                        pair_label(fit1, fit0), mu1 - mu0, mu1, mu0};
}

EffectEstimate ipwra_ate(const Dataset& d, const PSFit& fit1, const PSFit& fit0) {
  check_ate_fits(d, fit1, fit0);
  const CoefVector b1 =
      fit_wls(d, Subgroup::treated, ate_weights1(d, fit1), Weighting::inverse_ps);
  const CoefVector b0 = fit_wls(d, Subgroup::control, ate_weights0(d, fit0),
                                Weighting::inverse_one_minus_ps);
  const Eigen::VectorXd xbar = mean_covariates(d, Population::all).values;
  const double mu1 = xbar.dot(b1.beta);
  const double mu0 = xbar.dot(b0.beta);
  return EffectEstimate{Estimand::ate, Estimator::ipwra, pair_label(fit1, fit0),
                        mu1 - mu0, mu1, mu0};
}

EffectEstimate att_components(const Dataset& d, const PSFit& fit, Estimator estimator,
                              const std::optional<CoefVector>& beta0) {
  const Eigen::VectorXd odds = att_odds_weights(d, fit);
  const double n1 = static_cast<double>(d.n_treated());
  double ybar1 = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i] == 1) ybar1 += d.outcome()[i];
  }
  ybar1 /= n1;

  double mu0 = 0.0;
  switch (estimator) {
    case Estimator::ipw:
      mu0 = odds.dot(d.outcome()) / n1;
      break;
    case Estimator::nipw:
      mu0 = odds.dot(d.outcome()) / odds.sum();
      break;
    case Estimator::aipw:
    case Estimator::naipw: {
      if (!beta0) throw MethodMismatch("att aipw requires beta0");
      const Eigen::VectorXd yhat0 = d.covariates() * beta0->beta;
      const double denom = estimator == Estimator::aipw ? n1 : odds.sum();
      const Eigen::VectorXd x1bar = mean_covariates(d, Population::treated).values;
      mu0 = odds.dot(d.outcome() - yhat0) / denom + x1bar.dot(beta0->beta);
      break;
    }
    case Estimator::ipwra: {
      const CoefVector b0 = fit_wls(d, Subgroup::control, odds, Weighting::odds);
      mu0 = mean_covariates(d, Population::treated).values.dot(b0.beta);
      break;
    }
  }
  return EffectEstimate{Estimand::att, estimator, to_string(fit.method),
                        ybar1 - mu0, ybar1, mu0};
}

namespace {

EffectEstimate ate_with(const Dataset& d, Estimator estimator, const PSFit& fit1,
                        const PSFit& fit0) {
  switch (estimator) {
    case Estimator::ipw: return ipw_ate(d, fit1, fit0, false);
    case Estimator::nipw: return ipw_ate(d, fit1, fit0, true);
    case Estimator::aipw:
    case Estimator::naipw: {
      const CoefVector b1 = fit_ols(d, Subgroup::treated);
      const CoefVector b0 = fit_ols(d, Subgroup::control);
      return aipw_ate(d, fit1, fit0, b1, b0, estimator == Estimator::naipw);
    }
    case Estimator::ipwra: return ipwra_ate(d, fit1, fit0);
  }
  throw MethodMismatch("unknown estimator");
}

}  // namespace

EffectEstimate late(const Dataset& d, PSMethod ps_method, Estimator estimator,
                    const SolverConfig& cfg) {
  if (!d.has_instrument()) {
    throw LengthMismatch("late requires an instrument");
  }
  const Dataset dy = d.instrument_as_treatment(d.outcome());
  const Dataset dw = d.instrument_as_treatment(d.treatment().cast<double>());

  PSFit fit1 = ps_method == PSMethod::ipt_treated || ps_method == PSMethod::ipt_control
                   ? fit_ipt_treated(dy, cfg)
                   : fit_ps(dy, ps_method, cfg);
  PSFit fit0 = ps_method == PSMethod::ipt_treated || ps_method == PSMethod::ipt_control
                   ? fit_ipt_control(dy, cfg)
                   : fit1;

  const EffectEstimate num = ate_with(dy, estimator, fit1, fit0);
  const EffectEstimate den = ate_with(dw, estimator, fit1, fit0);
  if (std::abs(den.value) <= 1e-12) {
    throw DenominatorNearZero("ate of treatment on instrument is numerically zero");
  }
  return EffectEstimate{Estimand::late, estimator, num.ps_method,
                        num.value / den.value, num.value, den.value};
}

EffectEstimate latt(const Dataset& d, Estimator estimator, const SolverConfig& cfg) {
  if (!d.has_instrument()) {
    throw LengthMismatch("latt requires an instrument");
  }
  const Dataset dy = d.instrument_as_treatment(d.outcome());
  const Dataset dw = d.instrument_as_treatment(d.treatment().cast<double>());
  const PSFit fit = fit_cbps_att(dy, cfg);

  std::optional<CoefVector> by, bw;
  if (estimator == Estimator::aipw || estimator == Estimator::naipw) {
    by = fit_ols(dy, Subgroup::control);
    bw = fit_ols(dw, Subgroup::control);
  }
  const EffectEstimate num = att_components(dy, fit, estimator, by);
  const EffectEstimate den = att_components(dw, fit, estimator, bw);
  if (std::abs(den.value) <= 1e-12) {
    throw DenominatorNearZero("att of treatment on instrument is numerically zero");
  }
  return EffectEstimate{Estimand::latt, estimator, num.ps_method,
                        num.value / den.value, num.value, den.value};
}

}  // namespace cbal
