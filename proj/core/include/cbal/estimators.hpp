#pragma once

#include <optional>
#include <string>

#include "cbal/dataset.hpp"
#include "cbal/ps_solvers.hpp"
#include "cbal/regression.hpp"

namespace cbal {

enum class Estimand { ate, att, late, latt };
enum class Estimator { ipw, nipw, aipw, naipw, ipwra };

const char* to_string(Estimand e);
const char* to_string(Estimator e);

struct EffectEstimate {
  Estimand estimand;
  Estimator estimator;
  std::string ps_method;  // "ipt_treated+ipt_control" for paired fits
  double value;
  // ate/att: value = mu1 - mu0 (mu0 is mu_{0|1} for att).
  // late/latt: value = mu1 / mu0 (numerator / denominator effect).
  double mu1;
  double mu0;
};

// ATE estimators. fit1 supplies p for the treated term, fit0 for the
// control term; pass the same fit twice for single-fit methods.
EffectEstimate ipw_ate(const Dataset& d, const PSFit& fit1, const PSFit& fit0,
                       bool normalize);
EffectEstimate aipw_ate(const Dataset& d, const PSFit& fit1, const PSFit& fit0,
                        const CoefVector& beta1, const CoefVector& beta0,
                        bool normalize);
EffectEstimate ipwra_ate(const Dataset& d, const PSFit& fit1, const PSFit& fit0);

// ATT: mu1 is always the treated-sample mean of Y; mu0 uses control
// odds-weights p/(1-p). beta0 is required for aipw/naipw, ignored otherwise.
EffectEstimate att_components(const Dataset& d, const PSFit& fit,
                              Estimator estimator,
                              const std::optional<CoefVector>& beta0 = std::nullopt);

// Ratio estimators: the instrument plays the treatment role, one
// instrument fit serves numerator (outcome Y) and denominator (outcome W).
// ps_method here means: ipt -> (ipt_treated, ipt_control) pair,
// mle / cbps_ate -> single fit used on both sides.
EffectEstimate late(const Dataset& d, PSMethod ps_method, Estimator estimator,
                    const SolverConfig& cfg = {});
EffectEstimate latt(const Dataset& d, Estimator estimator, const SolverConfig& cfg = {});

}  // namespace cbal
