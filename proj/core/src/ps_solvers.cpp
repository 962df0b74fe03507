#include "cbal/ps_solvers.hpp"

#include <cmath>

#include "cbal/link.hpp"

namespace cbal {

const char* to_string(PSMethod m) {
  switch (m) {
    case PSMethod::mle: return "mle";
    case PSMethod::ipt_treated: return "ipt_treated";
    case PSMethod::ipt_control: return "ipt_control";
    case PSMethod::cbps_ate: return "cbps_ate";
    case PSMethod::cbps_att: return "cbps_att";
  }
  return "?";
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kIndexLimit = 350.0;  // exp() overflows well past this
constexpr double kSeparationEps = 1e-8;

double softplus(double z) {
  // log(1 + exp(z)) without overflow
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct Objective {
  const Dataset& d;
  PSMethod method;

  double scale() const {
    return method == PSMethod::cbps_att ? 1.0 / static_cast<double>(d.n_treated())
                                        : 1.0 / static_cast<double>(d.n());
  }

  bool index_ok(const Eigen::VectorXd& z) const {
    if (method == PSMethod::mle) return z.allFinite();
    return z.allFinite() && z.cwiseAbs().maxCoeff() < kIndexLimit;
  }

  double value(const Eigen::VectorXd& gamma) const {
    const Eigen::VectorXd z = d.covariates() * gamma;
    const auto& x = d.covariates();
    const auto& w = d.treatment();
    double f = 0.0;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      switch (method) {
        case PSMethod::mle:
          f += softplus(z[i]) - w[i] * z[i];
          break;
        case PSMethod::ipt_treated:
          f += w[i] ? std::exp(-z[i]) : x.row(i).dot(gamma);
          break;
        case PSMethod::ipt_control:
          f += w[i] ? -x.row(i).dot(gamma) : std::exp(z[i]);
          break;
        case PSMethod::cbps_ate:
          f += (w[i] ? std::exp(-z[i]) : std::exp(z[i])) - (2 * w[i] - 1) * z[i];
          break;
        case PSMethod::cbps_att:
          f += w[i] ? -x.row(i).dot(gamma) : std::exp(z[i]);
          break;
      }
    }
    return f * scale();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& gamma) const {
    const Eigen::VectorXd z = d.covariates() * gamma;
    const auto& x = d.covariates();
    const auto& w = d.treatment();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d.k());
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      double c = 0.0;
      switch (method) {
        case PSMethod::mle:
          c = logistic(z[i]).prob - w[i];
          break;
        case PSMethod::ipt_treated:
          c = w[i] ? -std::exp(-z[i]) : 1.0;
          break;
        case PSMethod::ipt_control:
          c = w[i] ? -1.0 : std::exp(z[i]);
          break;
        case PSMethod::cbps_ate:
          c = (w[i] ? -std::exp(-z[i]) : std::exp(z[i])) - (2 * w[i] - 1);
          break;
        case PSMethod::cbps_att:
          c = w[i] ? -1.0 : std::exp(z[i]);
          break;
      }
      g += c * x.row(i).transpose();
    }
    return g * scale();
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& gamma) const {
    const Eigen::VectorXd z = d.covariates() * gamma;
    const auto& x = d.covariates();
    const auto& w = d.treatment();
    Eigen::VectorXd wt(d.n());
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      switch (method) {
        case PSMethod::mle:
          wt[i] = logistic(z[i]).dprob;
          break;
        case PSMethod::ipt_treated:
          wt[i] = w[i] ? std::exp(-z[i]) : 0.0;
          break;
        case PSMethod::ipt_control:
        case PSMethod::cbps_att:
          wt[i] = w[i] ? 0.0 : std::exp(z[i]);
          break;
        case PSMethod::cbps_ate:
          wt[i] = w[i] ? std::exp(-z[i]) : std::exp(z[i]);
          break;
      }
    }
    return scale() * (x.transpose() * wt.asDiagonal() * x);
  }
};

// Average-scaled moment system in the orientation the identities are
// stated in; its max-norm equals the potential-gradient max-norm.
Eigen::VectorXd moment_at(const Dataset& d, PSMethod method, const Eigen::VectorXd& gamma) {
  const Objective obj{d, method};
  const Eigen::VectorXd g = obj.gradient(gamma);
  return method == PSMethod::ipt_control ? g : Eigen::VectorXd(-g);
}

[[noreturn]] void fail_no_converge(PSMethod method, const std::string& what) {
  if (method == PSMethod::mle) throw Separation("mle: " + what);
  throw Infeasible(std::string(to_string(method)) + ": " + what);
}

PSFit newton_solve(const Dataset& d, PSMethod method, const SolverConfig& cfg,
                   const Eigen::VectorXd& init) {
  const Objective obj{d, method};
  Eigen::VectorXd gamma = init;
  int iter = 0;
  double mnorm = moment_at(d, method, gamma).cwiseAbs().maxCoeff();

  while (mnorm > cfg.tol) {
    if (++iter > cfg.max_iter) {
      throw NoConvergence(std::string(to_string(method)) + ": no convergence after " +
                          std::to_string(cfg.max_iter) + " iterations (moment max-norm " +
                          std::to_string(mnorm) + ")");
    }
    const Eigen::VectorXd g = obj.gradient(gamma);
    const Eigen::MatrixXd h = obj.hessian(gamma);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd step = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      fail_no_converge(method, "singular Hessian in Newton step");
    }
    const double f0 = obj.value(gamma);
    const double slope = g.dot(step);
    // near the optimum the true decrease drops below the rounding noise in
    // f; the slack keeps the full Newton step acceptable there
    const double f_slack = 1e-12 * (1.0 + std::abs(f0));
    double t = 1.0;
    Eigen::VectorXd cand = gamma + step;
    while (!(obj.index_ok(d.covariates() * cand) &&
             obj.value(cand) <= f0 + kArmijo * t * slope + f_slack)) {
      t *= cfg.line_search_shrink;
      if (t < 1e-14) {
        fail_no_converge(method, "line search failed");
      }
      cand = gamma + t * step;
    }
    gamma = cand;
    if (!obj.index_ok(d.covariates() * gamma)) {
      fail_no_converge(method, "linear index diverged");
    }
    mnorm = moment_at(d, method, gamma).cwiseAbs().maxCoeff();
  }

  const Eigen::VectorXd z = d.covariates() * gamma;
  Eigen::VectorXd fitted(d.n());
  for (Eigen::Index i = 0; i < d.n(); ++i) fitted[i] = logistic(z[i]).prob;

  if (fitted.minCoeff() <= 0.0 || fitted.maxCoeff() >= 1.0) {
    fail_no_converge(method, "fitted probability reached 0 or 1");
  }
  if (method == PSMethod::mle &&
      (fitted.minCoeff() < kSeparationEps || fitted.maxCoeff() > 1.0 - kSeparationEps)) {
    throw Separation("mle: fitted probabilities pinned at the boundary (quasi-separation)");
  }
  return PSFit{method, std::move(gamma), std::move(fitted), mnorm, iter};
}

Eigen::VectorXd mle_init(const Dataset& d) {
  Eigen::VectorXd g0 = Eigen::VectorXd::Zero(d.k());
  g0[0] = std::log(static_cast<double>(d.n_treated()) /
                   static_cast<double>(d.n_control()));
  return g0;
}

PSFit balancing_fit(const Dataset& d, PSMethod method, const SolverConfig& cfg) {
  const PSFit mle = newton_solve(d, PSMethod::mle, cfg, mle_init(d));
  return newton_solve(d, method, cfg, mle.gamma);
}

}  // namespace

PSFit fit_mle(const Dataset& d, const SolverConfig& cfg) {
  return newton_solve(d, PSMethod::mle, cfg, mle_init(d));
}

PSFit fit_ipt_treated(const Dataset& d, const SolverConfig& cfg) {
  return balancing_fit(d, PSMethod::ipt_treated, cfg);
}

PSFit fit_ipt_control(const Dataset& d, const SolverConfig& cfg) {
  return balancing_fit(d, PSMethod::ipt_control, cfg);
}

PSFit fit_cbps_ate(const Dataset& d, const SolverConfig& cfg) {
  return balancing_fit(d, PSMethod::cbps_ate, cfg);
}

PSFit fit_cbps_att(const Dataset& d, const SolverConfig& cfg) {
  return balancing_fit(d, PSMethod::cbps_att, cfg);
}

PSFit fit_ps(const Dataset& d, PSMethod method, const SolverConfig& cfg) {
  switch (method) {
    case PSMethod::mle: return fit_mle(d, cfg);
    case PSMethod::ipt_treated: return fit_ipt_treated(d, cfg);
    case PSMethod::ipt_control: return fit_ipt_control(d, cfg);
    case PSMethod::cbps_ate: return fit_cbps_ate(d, cfg);
    case PSMethod::cbps_att: return fit_cbps_att(d, cfg);
  }
  throw MethodMismatch("unknown PS method");
}

Eigen::VectorXd moment_residual(const PSFit& fit, const Dataset& d) {
  if (fit.gamma.size() != d.k() || fit.fitted.size() != d.n()) {
    throw MethodMismatch("fit dimensions do not match dataset");
  }
  return moment_at(d, fit.method, fit.gamma);
}

namespace detail {

double potential_value(const Dataset& d, PSMethod method, const Eigen::VectorXd& gamma) {
  if (method == PSMethod::mle) throw MethodMismatch("mle has no balancing potential");
  return Objective{d, method}.value(gamma);
}

Eigen::VectorXd potential_gradient(const Dataset& d, PSMethod method,
                                   const Eigen::VectorXd& gamma) {
  if (method == PSMethod::mle) throw MethodMismatch("mle has no balancing potential");
  return Objective{d, method}.gradient(gamma);
}

}  // namespace detail

}  // namespace cbal
