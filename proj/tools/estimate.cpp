// Command-line front end: CSV in, effect estimates + balance table out
// (JSON or human table), with the cross-estimator equivalence audit.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cbal/csv.hpp"
#include "cbal/dataset.hpp"
#include "cbal/diagnostics.hpp"
#include "cbal/dgp.hpp"
#include "cbal/estimators.hpp"
#include "cbal/json_out.hpp"
#include "cbal/ps_solvers.hpp"

namespace {

using cbal::Estimand;
using cbal::Estimator;
using cbal::PSMethod;
using json = nlohmann::ordered_json;

struct RunConfig {
  std::string input_path;
  std::string outcome_col;
  std::string treatment_col;
  std::string instrument_col;
  std::vector<std::string> covariate_cols;
  std::string estimand = "ate";
  std::string ps = "ipt";
  std::string estimator = "all";
  double tol = 1e-9;
  int max_iter = 200;
  std::string format = "json";
};

Estimand parse_estimand(const std::string& s) {
  if (s == "ate") return Estimand::ate;
  if (s == "att") return Estimand::att;
  if (s == "late") return Estimand::late;
  if (s == "latt") return Estimand::latt;
  throw cbal::Error("unknown estimand: " + s);
}

Estimator parse_estimator(const std::string& s) {
  if (s == "ipw") return Estimator::ipw;
  if (s == "nipw") return Estimator::nipw;
  if (s == "aipw") return Estimator::aipw;
  if (s == "naipw") return Estimator::naipw;
  if (s == "ipwra") return Estimator::ipwra;
  throw cbal::Error("unknown estimator: " + s);
}

// ps name -> solver method for the given estimand.
PSMethod resolve_ps(const std::string& ps, Estimand estimand) {
  const bool att_like = estimand == Estimand::att || estimand == Estimand::latt;
  if (ps == "mle") return PSMethod::mle;
  if (ps == "ipt") {
    if (att_like) throw cbal::Error("--ps ipt is only valid for estimands ate and late");
    return PSMethod::ipt_treated;  // stands for the treated+control pair
  }
  if (ps == "cbps") return att_like ? PSMethod::cbps_att : PSMethod::cbps_ate;
  throw cbal::Error("unknown ps method: " + ps);
}

cbal::Dataset load_dataset(const RunConfig& cfg) {
  const cbal::CsvTable table = cbal::read_csv(cfg.input_path);
  const auto n = static_cast<Eigen::Index>(table.rows());
  if (n == 0) throw cbal::Error("input file has no data rows");

  Eigen::MatrixXd raw(n, static_cast<Eigen::Index>(cfg.covariate_cols.size()));
  for (std::size_t j = 0; j < cfg.covariate_cols.size(); ++j) {
    const auto& col = table.column(cfg.covariate_cols[j]);
    for (Eigen::Index i = 0; i < n; ++i) raw(i, static_cast<Eigen::Index>(j)) = col[i];
  }
  auto to_binary = [&](const std::string& name) {
    const auto& col = table.column(name);
    Eigen::VectorXi v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (col[i] != 0.0 && col[i] != 1.0) {
        throw cbal::Error("column " + name + " must contain only 0 and 1");
      }
      v[i] = static_cast<int>(col[i]);
    }
    return v;
  };
  const auto& ycol = table.column(cfg.outcome_col);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = ycol[i];

  std::optional<Eigen::VectorXi> z;
  if (!cfg.instrument_col.empty()) z = to_binary(cfg.instrument_col);
  return cbal::Dataset::build(raw, to_binary(cfg.treatment_col), y, z);
}

json estimate_to_json(const cbal::EffectEstimate& e) {
  return json{{"value", e.value}, {"mu1", e.mu1}, {"mu0", e.mu0}};
}

json balance_to_json(const cbal::BalanceReport& b) {
  json rows = json::array();
  for (const auto& r : b.rows) {
    rows.push_back(json{{"covariate", r.covariate},
                        {"unweighted_treated_mean", r.unweighted_treated_mean},
                        {"unweighted_control_mean", r.unweighted_control_mean},
                        {"weighted_treated_mean", r.weighted_treated_mean},
                        {"weighted_control_mean", r.weighted_control_mean},
                        {"target_mean", r.target_mean}});
  }
  json residuals = json::object();
  for (const auto& [name, v] : b.identity_residuals) residuals[name] = v;
  return json{{"ps_method", b.ps_method},
              {"rows", rows},
              {"weight_sums",
               json{{"treated", b.treated_weight_sum},
                    {"control", b.control_weight_sum},
                    {"expected_treated", b.expected_treated_weight_sum},
                    {"expected_control", b.expected_control_weight_sum}}},
              {"identity_residuals", residuals}};
}

json audit_to_json(const cbal::AuditReport& a) {
  json est = json::object();
  for (const auto& [tag, v] : a.estimates) est[tag] = v;
  return json{{"estimand", cbal::to_string(a.estimand)},
              {"ps_method", a.ps_method},
              {"estimates", est},
              {"max_pairwise_gap", a.max_pairwise_gap},
              {"expected_equivalent", a.expected_equivalent}};
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_table(const json& report) {
  std::cout << "estimand: " << report["estimand"].get<std::string>()
            << "  ps: " << report["ps_method"].get<std::string>()
            << "  n: " << report["n"].get<long>()
            << "  n_treated: " << report["n_treated"].get<long>() << "\n\n";
  std::cout << "estimates\n";
  for (const auto& [tag, e] : report["estimates"].items()) {
    std::cout << "  " << tag << ": " << fmt6(e["value"].get<double>())
              << "  (mu1 " << fmt6(e["mu1"].get<double>()) << ", mu0 "
              << fmt6(e["mu0"].get<double>()) << ")\n";
  }
  const auto& bal = report["balance"];
  std::cout << "\nbalance (weighted means vs target)\n";
  for (const auto& r : bal["rows"]) {
    std::cout << "  " << r["covariate"].get<std::string>() << ": treated "
              << fmt6(r["weighted_treated_mean"].get<double>()) << ", control "
              << fmt6(r["weighted_control_mean"].get<double>()) << ", target "
              << fmt6(r["target_mean"].get<double>()) << "\n";
  }
  std::cout << "\nidentity residuals\n";
  for (const auto& [name, v] : bal["identity_residuals"].items()) {
    std::cout << "  " << name << ": " << fmt6(v.get<double>()) << "\n";
  }
  if (!report["audit"].is_null()) {
    const auto& a = report["audit"];
    std::cout << "\naudit: max pairwise gap "
              << fmt6(a["max_pairwise_gap"].get<double>()) << ", expected equivalent: "
              << (a["expected_equivalent"].get<bool>() ? "yes" : "no") << "\n";
  }
}

int run(const RunConfig& cfg) {
  const Estimand estimand = parse_estimand(cfg.estimand);
  const bool needs_instrument = estimand == Estimand::late || estimand == Estimand::latt;
  if (needs_instrument && cfg.instrument_col.empty()) {
    throw cbal::Error("--estimand " + cfg.estimand + " requires --instrument");
  }
  const PSMethod method = resolve_ps(cfg.ps, estimand);
  const cbal::SolverConfig scfg{cfg.tol, cfg.max_iter, 0.5};
  const cbal::Dataset d = load_dataset(cfg);

  const bool ipt_pair = cfg.ps == "ipt";

  std::vector<Estimator> wanted;
  if (cfg.estimator == "all") {
    wanted = {Estimator::ipw, Estimator::nipw, Estimator::aipw, Estimator::naipw,
              Estimator::ipwra};
  } else {
    wanted = {parse_estimator(cfg.estimator)};
  }

  json estimates = json::object();
  json solver = json::object();
  json balance;

  auto record_fit = [&](const cbal::PSFit& f) {
    solver[cbal::to_string(f.method)] =
        json{{"iterations", f.iterations}, {"moment_residual_norm", f.moment_residual_norm}};
  };

  std::string ps_label;
  if (estimand == Estimand::ate || estimand == Estimand::att) {
    cbal::PSFit fit1 = ipt_pair ? cbal::fit_ipt_treated(d, scfg)
                                : cbal::fit_ps(d, method, scfg);
    cbal::PSFit fit0 = ipt_pair ? cbal::fit_ipt_control(d, scfg) : fit1;
    record_fit(fit1);
    if (ipt_pair) record_fit(fit0);
    balance = balance_to_json(cbal::balance_report(d, fit1, fit0));
    ps_label = balance["ps_method"].get<std::string>();

    std::optional<cbal::CoefVector> b1, b0;
    for (Estimator e : wanted) {
      cbal::EffectEstimate est{};
      if (estimand == Estimand::ate) {
        switch (e) {
          case Estimator::ipw: est = cbal::ipw_ate(d, fit1, fit0, false); break;
          case Estimator::nipw: est = cbal::ipw_ate(d, fit1, fit0, true); break;
          case Estimator::aipw:
          case Estimator::naipw:
            if (!b1) b1 = cbal::fit_ols(d, cbal::Subgroup::treated);
            if (!b0) b0 = cbal::fit_ols(d, cbal::Subgroup::control);
            est = cbal::aipw_ate(d, fit1, fit0, *b1, *b0, e == Estimator::naipw);
            break;
          case Estimator::ipwra: est = cbal::ipwra_ate(d, fit1, fit0); break;
        }
      } else {
        if ((e == Estimator::aipw || e == Estimator::naipw) && !b0) {
          b0 = cbal::fit_ols(d, cbal::Subgroup::control);
        }
        est = cbal::att_components(d, fit1, e, b0);
      }
      estimates[cbal::to_string(e)] = estimate_to_json(est);
    }
  } else {
    // Ratio estimands: the instrument plays the treatment role.
    const cbal::Dataset dy = d.instrument_as_treatment(d.outcome());
    cbal::PSFit fit1 = estimand == Estimand::latt
                           ? cbal::fit_cbps_att(dy, scfg)
                           : (ipt_pair ? cbal::fit_ipt_treated(dy, scfg)
                                       : cbal::fit_ps(dy, method, scfg));
    cbal::PSFit fit0 =
        estimand == Estimand::late && ipt_pair ? cbal::fit_ipt_control(dy, scfg) : fit1;
    record_fit(fit1);
    if (ipt_pair && estimand == Estimand::late) record_fit(fit0);
    balance = balance_to_json(cbal::balance_report(dy, fit1, fit0));
    ps_label = balance["ps_method"].get<std::string>();

    for (Estimator e : wanted) {
      const cbal::EffectEstimate est = estimand == Estimand::late
                                           ? cbal::late(d, method, e, scfg)
                                           : cbal::latt(d, e, scfg);
      estimates[cbal::to_string(e)] = estimate_to_json(est);
    }
  }

  json audit;
  if (cfg.estimator == "all") {
    audit = audit_to_json(cbal::equivalence_audit(d, estimand, method, scfg));
  }

  json report{{"estimand", cfg.estimand},
              {"ps_method", ps_label},
              {"n", static_cast<long>(d.n())},
              {"n_treated", static_cast<long>(d.n_treated())},
              {"estimates", estimates},
              {"balance", balance},
              {"audit", audit.is_null() ? json() : audit},
              {"solver", solver}};

  if (cfg.format == "table") {
    print_table(report);
  } else {
    std::cout << cbal::dump_canonical(report) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Propensity-score weighting estimators with covariate balancing"};
  RunConfig cfg;
  app.add_option("--input", cfg.input_path, "input CSV file")->required();
  app.add_option("--outcome", cfg.outcome_col, "outcome column name")->required();
  app.add_option("--treatment", cfg.treatment_col, "treatment column name")->required();
  app.add_option("--instrument", cfg.instrument_col, "instrument column name");
  app.add_option("--covariates", cfg.covariate_cols, "covariate column names")
      ->required()
      ->delimiter(',');
  app.add_option("--estimand", cfg.estimand, "ate|att|late|latt");
  app.add_option("--ps", cfg.ps, "mle|ipt|cbps");
  app.add_option("--estimator", cfg.estimator, "ipw|nipw|aipw|naipw|ipwra|all");
  app.add_option("--tol", cfg.tol, "solver moment tolerance");
  app.add_option("--max-iter", cfg.max_iter, "solver iteration cap");
  app.add_option("--format", cfg.format, "json|table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    return run(cfg);
  } catch (const cbal::Separation& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const cbal::NoConvergence& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const cbal::Infeasible& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
