#include <doctest.h>

#include <cmath>

#include "cbal/dgp.hpp"
#include "cbal/diagnostics.hpp"
#include "test_util.hpp"

using namespace cbal;
using cbal::testing::make_d4;

TEST_CASE("d4 ipt balance is exact") {
  const Dataset d = make_d4();
  const PSFit f1 = fit_ipt_treated(d);
  const PSFit f0 = fit_ipt_control(d);
  const BalanceReport rep = balance_report(d, f1, f0);
  CHECK(rep.rows.size() == 2);
  CHECK(rep.rows[1].weighted_treated_mean == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.rows[1].target_mean == doctest::Approx(0.5).epsilon(1e-15));
  for (const auto& [name, v] : rep.identity_residuals) {
    CAPTURE(name);
    CHECK(v >= 0.0);
    CHECK(v <= 1e-9);
  }
  CHECK(rep.identity_residuals.count("treated_weight_sum") == 1);
  CHECK(rep.identity_residuals.count("control_weight_sum") == 1);
  CHECK(rep.identity_residuals.count("weight_sum_equality") == 0);
}

TEST_CASE("d4 mle fit balances the saturated design") {
  const Dataset d = make_d4();
  const PSFit f = fit_mle(d);
  const BalanceReport rep = balance_report(d, f, f);
  for (const auto& [name, v] : rep.identity_residuals) {
    CAPTURE(name);
    CHECK(v <= 1e-9);
  }
  CHECK(rep.identity_residuals.count("score_orthogonality") == 1);
}

TEST_CASE("mle does not balance s1") {
  const Dataset d = make_s1();
  const PSFit f = fit_mle(d);
  const BalanceReport rep = balance_report(d, f, f);
  const double worst = std::max(rep.identity_residuals.at("balance_treated"),
                                rep.identity_residuals.at("balance_control"));
  CHECK(worst > 1e-3);
  CHECK(rep.identity_residuals.at("score_orthogonality") <= 1e-9);
}

TEST_CASE("cbps_att balance report") {
  const Dataset d = make_s1();
  const PSFit f = fit_cbps_att(d);
  const BalanceReport rep = balance_report(d, f, f);
  CHECK(rep.identity_residuals.at("att_balance") <= 1e-8);
  CHECK(rep.identity_residuals.at("att_count") <=
        10.0 * 1e-9 * static_cast<double>(d.n_treated()));
  CHECK(rep.expected_treated_weight_sum == static_cast<double>(d.n_treated()));
}

TEST_CASE("balancing fits keep residuals within 10x solver tol") {
  const Dataset d = generate(corpus_spec(12, false));
  const double n = static_cast<double>(d.n());
  {
    const BalanceReport rep = balance_report(d, fit_ipt_treated(d), fit_ipt_control(d));
    CHECK(rep.identity_residuals.at("balance_treated") <= 10.0 * 1e-9);
    CHECK(rep.identity_residuals.at("balance_control") <= 10.0 * 1e-9);
    CHECK(rep.identity_residuals.at("treated_weight_sum") <= 10.0 * 1e-9 * n);
    CHECK(rep.identity_residuals.at("control_weight_sum") <= 10.0 * 1e-9 * n);
  }
  {
    const PSFit f = fit_cbps_ate(d);
    const BalanceReport rep = balance_report(d, f, f);
    CHECK(rep.identity_residuals.at("weight_sum_equality") <= 10.0 * 1e-9 * n);
  }
}

TEST_CASE("audit: d4 ate ipt") {
  const AuditReport rep = equivalence_audit(make_d4(), Estimand::ate, PSMethod::ipt_treated);
  CHECK(rep.estimates.size() == 5);
  for (const auto& [tag, v] : rep.estimates) {
    CHECK(v == doctest::Approx(1.5).epsilon(1e-10));
  }
  CHECK(rep.max_pairwise_gap <= 1e-10);
  CHECK(rep.expected_equivalent);
}

TEST_CASE("audit: s1 ate mle") {
  const AuditReport rep = equivalence_audit(make_s1(), Estimand::ate, PSMethod::mle);
  CHECK(rep.max_pairwise_gap > 1e-6);
  CHECK_FALSE(rep.expected_equivalent);
}

TEST_CASE("audit: d4 att cbps") {
  const AuditReport rep = equivalence_audit(make_d4(), Estimand::att, PSMethod::cbps_att);
  for (const auto& [tag, v] : rep.estimates) {
    CHECK(v == doctest::Approx(1.5).epsilon(1e-10));
  }
  CHECK(rep.max_pairwise_gap <= 1e-10);
  CHECK(rep.expected_equivalent);
}

TEST_CASE("expected-equivalent audits stay within tolerance") {
  for (std::uint64_t seed : {4u, 21u}) {
    const Dataset d = generate(corpus_spec(seed, false));
    for (Estimand est : {Estimand::ate, Estimand::att}) {
      const PSMethod m = est == Estimand::ate ? PSMethod::ipt_treated : PSMethod::cbps_att;
      const AuditReport rep = equivalence_audit(d, est, m);
      REQUIRE(rep.expected_equivalent);
      double vmax = 0.0;
      for (const auto& [tag, v] : rep.estimates) vmax = std::max(vmax, std::abs(v));
      CHECK(rep.max_pairwise_gap <= 1e-8 * (1.0 + vmax));
    }
  }
  const Dataset dz = generate(corpus_spec(7, true));
  const AuditReport rep = equivalence_audit(dz, Estimand::latt, PSMethod::cbps_att);
  REQUIRE(rep.expected_equivalent);
  double vmax = 0.0;
  for (const auto& [tag, v] : rep.estimates) vmax = std::max(vmax, std::abs(v));
  CHECK(rep.max_pairwise_gap <= 1e-8 * (1.0 + vmax));
}

TEST_CASE("audit: late under ipt is five-way equal") {
  const AuditReport rep =
      equivalence_audit(make_s2(), Estimand::late, PSMethod::ipt_treated);
  REQUIRE(rep.expected_equivalent);
  double vmax = 0.0;
  for (const auto& [tag, v] : rep.estimates) vmax = std::max(vmax, std::abs(v));
  CHECK(rep.max_pairwise_gap <= 1e-8 * (1.0 + vmax));
}
