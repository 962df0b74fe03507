#include <doctest.h>

#include <cmath>

#include "cbal/dgp.hpp"
#include "cbal/ps_solvers.hpp"
#include "cbal/regression.hpp"
#include "test_util.hpp"

using namespace cbal;
using cbal::testing::make_d4;

namespace {

// Weighted first-order-condition residual, average-scaled.
double foc_max_norm(const Dataset& d, const Eigen::VectorXd& w, const CoefVector& b) {
  const Eigen::VectorXd resid = d.outcome() - d.covariates() * b.beta;
  const Eigen::VectorXd cross =
      d.covariates().transpose() * (w.array() * resid.array()).matrix();
  return (cross / static_cast<double>(d.n())).cwiseAbs().maxCoeff();
}

Eigen::VectorXd subgroup_indicator(const Dataset& d, Subgroup s) {
  Eigen::VectorXd w(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    w[i] = (d.treatment()[i] == 1) == (s == Subgroup::treated) ? 1.0 : 0.0;
  }
  return w;
}

}  // namespace

TEST_CASE("d4 subgroup regressions interpolate exactly") {
  const Dataset d = make_d4();
  const CoefVector bt = fit_ols(d, Subgroup::treated);
  CHECK(bt.beta[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(bt.beta[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(bt.n_used == 2);
  const CoefVector bc = fit_ols(d, Subgroup::control);
  CHECK(bc.beta[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bc.beta[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("constant outcome loads on the intercept only") {
  const Dataset base = generate(corpus_spec(6, false));
  const Dataset d = base.with_outcome(Eigen::VectorXd::Constant(base.n(), 3.25));
  const CoefVector b = fit_ols(d, Subgroup::treated);
  CHECK(b.beta[0] == doctest::Approx(3.25).epsilon(1e-10));
  for (Eigen::Index j = 1; j < d.k(); ++j) {
    CHECK(std::abs(b.beta[j]) <= 1e-10);
  }
}

TEST_CASE("wls with constant subgroup weights equals ols") {
  const Dataset d4 = make_d4();
  const CoefVector w4 =
      fit_wls(d4, Subgroup::treated, subgroup_indicator(d4, Subgroup::treated) / 0.5);
  CHECK(w4.beta[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(w4.beta[1] == doctest::Approx(3.0).epsilon(1e-12));

  const Dataset d = generate(corpus_spec(8, false));
  const CoefVector ols = fit_ols(d, Subgroup::control);
  const CoefVector wls =
      fit_wls(d, Subgroup::control, 2.5 * subgroup_indicator(d, Subgroup::control));
  CHECK((ols.beta - wls.beta).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("weight scale invariance") {
  const Dataset d = make_s1();
  const PSFit fit = fit_ipt_treated(d);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i]) w[i] = 1.0 / fit.fitted[i];
  }
  const CoefVector a = fit_wls(d, Subgroup::treated, w);
  const CoefVector b = fit_wls(d, Subgroup::treated, 137.0 * w);
  CHECK((a.beta - b.beta).cwiseAbs().maxCoeff() <= 1e-10);

  const double ymax = d.outcome().cwiseAbs().maxCoeff();
  CHECK(foc_max_norm(d, w, a) <= 1e-9 * (1.0 + ymax));
}

TEST_CASE("wls first-order conditions hold on every fit") {
  for (std::uint64_t seed : {2u, 5u, 13u}) {
    const Dataset d = generate(corpus_spec(seed, false));
    const PSFit f1 = fit_ipt_treated(d);
    const PSFit f0 = fit_ipt_control(d);
    Eigen::VectorXd w1 = Eigen::VectorXd::Zero(d.n());
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(d.n());
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      if (d.treatment()[i]) w1[i] = 1.0 / f1.fitted[i];
      else w0[i] = 1.0 / (1.0 - f0.fitted[i]);
    }
    const double ymax = d.outcome().cwiseAbs().maxCoeff();
    CHECK(foc_max_norm(d, w1, fit_wls(d, Subgroup::treated, w1)) <= 1e-9 * (1.0 + ymax));
    CHECK(foc_max_norm(d, w0, fit_wls(d, Subgroup::control, w0)) <= 1e-9 * (1.0 + ymax));
    CHECK(foc_max_norm(d, subgroup_indicator(d, Subgroup::treated),
                       fit_ols(d, Subgroup::treated)) <= 1e-9 * (1.0 + ymax));
  }
}

TEST_CASE("error paths") {
  const Dataset d = make_d4();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
  w[1] = -1.0;
  CHECK_THROWS_AS(fit_wls(d, Subgroup::treated, w), NegativeWeight);

  Eigen::VectorXd off = Eigen::VectorXd::Zero(4);
  off[0] = 1.0;  // control unit, treated subgroup
  CHECK_THROWS_AS(fit_wls(d, Subgroup::treated, off), NegativeWeight);

  Eigen::VectorXd thin = Eigen::VectorXd::Zero(4);
  thin[1] = 1.0;  // one treated row cannot identify two coefficients
  CHECK_THROWS_AS(fit_wls(d, Subgroup::treated, thin), RankDeficientSubgroup);
}

TEST_CASE("exact fit when subgroup size equals k") {
  const Dataset d = make_d4();
  const CoefVector b = fit_ols(d, Subgroup::treated);
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i]) {
      CHECK(std::abs(d.outcome()[i] - d.covariates().row(i).dot(b.beta)) <= 1e-10);
    }
  }
}
