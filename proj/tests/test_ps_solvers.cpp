#include <doctest.h>

#include <cmath>

#include "cbal/dgp.hpp"
#include "cbal/ps_solvers.hpp"
#include "test_util.hpp"

using namespace cbal;
using cbal::testing::make_binary_stratified;
using cbal::testing::make_d4;
using cbal::testing::stratum_treated_fraction;

namespace {

const PSMethod kAllMethods[] = {PSMethod::mle, PSMethod::ipt_treated,
                                PSMethod::ipt_control, PSMethod::cbps_ate,
                                PSMethod::cbps_att};

Dataset intercept_only(int n1, int n0) {
  const int n = n1 + n0;
  Eigen::MatrixXd x(n, 0);
  Eigen::VectorXi w(n);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    w[i] = i < n1 ? 1 : 0;
    y[i] = 0.1 * i;
  }
  return Dataset::build(x, w, y);
}

double treated_weight_sum(const Dataset& d, const PSFit& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (d.treatment()[i]) s += 1.0 / f.fitted[i];
  }
  return s;
}

double control_weight_sum(const Dataset& d, const PSFit& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (!d.treatment()[i]) s += 1.0 / (1.0 - f.fitted[i]);
  }
  return s;
}

double odds_weight_sum(const Dataset& d, const PSFit& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (!d.treatment()[i]) s += f.fitted[i] / (1.0 - f.fitted[i]);
  }
  return s;
}

}  // namespace

TEST_CASE("every method fits d4 at p = 1/2") {
  const Dataset d = make_d4();
  for (PSMethod m : kAllMethods) {
    const PSFit f = fit_ps(d, m);
    CAPTURE(to_string(m));
    CHECK(f.moment_residual_norm <= 1e-9);
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(f.fitted[i] == doctest::Approx(0.5).epsilon(1e-10));
    }
  }
}

TEST_CASE("d4 mle residual is zero") {
  const Dataset d = make_d4();
  const PSFit f = fit_mle(d);
  const Eigen::VectorXd r = moment_residual(f, d);
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("d4 ipt weight sums equal n") {
  const Dataset d = make_d4();
  CHECK(treated_weight_sum(d, fit_ipt_treated(d)) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(control_weight_sum(d, fit_ipt_control(d)) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(odds_weight_sum(d, fit_cbps_att(d)) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("intercept-only design is forced to the treated share") {
  const Dataset d = intercept_only(3, 7);
  const double share = 0.3;
  for (PSMethod m : kAllMethods) {
    const PSFit f = fit_ps(d, m);
    CAPTURE(to_string(m));
    CHECK(f.gamma[0] == doctest::Approx(std::log(3.0 / 7.0)).epsilon(1e-9));
    CHECK(f.fitted[0] == doctest::Approx(share).epsilon(1e-10));
  }
  // for cbps_ate the common weight sum here is exactly N
  const PSFit f = fit_cbps_ate(d);
  CHECK(treated_weight_sum(d, f) == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(control_weight_sum(d, f) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("perfect separation is detected") {
  Eigen::MatrixXd x(4, 1);
  x << 1, 1, 0, 0;
  Eigen::VectorXi w(4);
  w << 1, 1, 0, 0;
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  const Dataset d = Dataset::build(x, w, y);
  CHECK_THROWS_AS(fit_mle(d), Separation);
}

TEST_CASE("weight-sum identities on generated data") {
  for (std::uint64_t seed : {1u, 2u, 9u, 14u}) {
    const Dataset d = generate(corpus_spec(seed, false));
    const double n = static_cast<double>(d.n());
    const double n1 = static_cast<double>(d.n_treated());

    const PSFit ipt1 = fit_ipt_treated(d);
    CHECK(std::abs(treated_weight_sum(d, ipt1) - n) <= n * 1e-9);

    const PSFit ipt0 = fit_ipt_control(d);
    CHECK(std::abs(control_weight_sum(d, ipt0) - n) <= n * 1e-9);

    const PSFit cbps = fit_cbps_ate(d);
    CHECK(std::abs(treated_weight_sum(d, cbps) - control_weight_sum(d, cbps)) <= n * 1e-9);

    const PSFit att = fit_cbps_att(d);
    CHECK(std::abs(odds_weight_sum(d, att) - n1) <= n1 * 1e-9);

    for (const PSFit* f : {&ipt1, &ipt0, &cbps, &att}) {
      CHECK(f->moment_residual_norm <= 1e-9);
      CHECK(moment_residual(*f, d).cwiseAbs().maxCoeff() ==
            doctest::Approx(f->moment_residual_norm).epsilon(1e-12));
      CHECK(f->fitted.minCoeff() > 0.0);
      CHECK(f->fitted.maxCoeff() < 1.0);
    }
  }
}

TEST_CASE("treated and control tilts differ on s1") {
  const Dataset s1 = make_s1();
  const PSFit f1 = fit_ipt_treated(s1);
  const PSFit f0 = fit_ipt_control(s1);
  CHECK((f1.gamma - f0.gamma).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("cbps_ate common weight sum on s1 is not n") {
  const Dataset s1 = make_s1();
  const PSFit f = fit_cbps_ate(s1);
  const double n = static_cast<double>(s1.n());
  const double s = treated_weight_sum(s1, f);
  CHECK(std::abs(s - control_weight_sum(s1, f)) <= n * 1e-9);
  CHECK(std::abs(s - n) > 1e-3 * n);
}

TEST_CASE("mle residual orthogonality on s1") {
  const Dataset s1 = make_s1();
  const PSFit f = fit_mle(s1);
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(s1.k());
  for (Eigen::Index i = 0; i < s1.n(); ++i) {
    cross += (s1.treatment()[i] - f.fitted[i]) * s1.covariates().row(i).transpose();
  }
  CHECK((cross / static_cast<double>(s1.n())).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("perturbed gamma leaves a visible residual") {
  const Dataset d = make_d4();
  PSFit f = fit_mle(d);
  f.gamma[0] += 0.1;
  CHECK(moment_residual(f, d).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("moment_residual rejects mismatched dataset") {
  const Dataset d4 = make_d4();
  const Dataset s1 = make_s1();
  const PSFit f = fit_mle(d4);
  CHECK_THROWS_AS(moment_residual(f, s1), MethodMismatch);
}

TEST_CASE("dual gradients match finite differences") {
  const Dataset d = generate(corpus_spec(4, false));
  const double h = 1e-6;
  SplitMixRng rng(99);
  for (PSMethod m : {PSMethod::ipt_treated, PSMethod::ipt_control, PSMethod::cbps_ate,
                     PSMethod::cbps_att}) {
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::VectorXd gamma(d.k());
      for (Eigen::Index j = 0; j < d.k(); ++j) gamma[j] = rng.next_symmetric();
      const Eigen::VectorXd g = detail::potential_gradient(d, m, gamma);
      for (Eigen::Index j = 0; j < d.k(); ++j) {
        Eigen::VectorXd up = gamma, dn = gamma;
        up[j] += h;
        dn[j] -= h;
        const double fd =
            (detail::potential_value(d, m, up) - detail::potential_value(d, m, dn)) /
            (2.0 * h);
        CAPTURE(to_string(m));
        CHECK(std::abs(g[j] - fd) <= 1e-6 * (1.0 + std::abs(g[j])));
      }
    }
  }
}

TEST_CASE("stratum closed form matches the solver") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = make_binary_stratified(seed, 60);
    const auto frac = stratum_treated_fraction(d);
    for (PSMethod m : kAllMethods) {
      const PSFit f = fit_ps(d, m);
      CAPTURE(to_string(m));
      for (Eigen::Index i = 0; i < d.n(); ++i) {
        const double expect = frac.at(static_cast<int>(d.covariates()(i, 1)));
        CHECK(std::abs(f.fitted[i] - expect) <= 1e-10);
      }
    }
  }
}

TEST_CASE("tight iteration cap raises no-convergence") {
  const Dataset s1 = make_s1();
  SolverConfig cfg;
  cfg.max_iter = 1;
  CHECK_THROWS_AS(fit_mle(s1, cfg), NoConvergence);
}
