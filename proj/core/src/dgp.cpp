#include "cbal/dgp.hpp"

#include <cmath>

#include "cbal/link.hpp"

namespace cbal {

double SplitMixRng::next_normal() {
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace {

// Halve the index coefficients until every implied probability is inside
// (0.02, 0.98); logistic(0) = 0.5, so this terminates.
Eigen::VectorXd bounded_probs(const Eigen::MatrixXd& design, Eigen::VectorXd coefs) {
  Eigen::VectorXd p(design.rows());
  for (int pass = 0; pass < 64; ++pass) {
    const Eigen::VectorXd z = design * coefs;
    for (Eigen::Index i = 0; i < z.size(); ++i) p[i] = logistic(z[i]).prob;
    if (p.minCoeff() > 0.02 && p.maxCoeff() < 0.98) return p;
    coefs *= 0.5;
  }
  return p;
}

Dataset try_draw(const DGPSpec& spec, std::uint64_t substream) {
  const Eigen::Index k = spec.k_continuous + 1;
  if (spec.treatment_coefs.size() != k || spec.outcome_coefs_treated.size() != k ||
      spec.outcome_coefs_control.size() != k) {
    throw LengthMismatch("coefficient vectors must have length k_continuous + 1");
  }
  if (spec.instrumented &&
      (!spec.compliance_coefs || spec.compliance_coefs->size() != k + 1)) {
    throw LengthMismatch("instrumented spec needs compliance_coefs of length K + 1");
  }

  SplitMixRng rng(spec.seed * 0x2545f4914f6cdd1dULL + substream);

  Eigen::MatrixXd raw(spec.n, spec.k_continuous);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    for (Eigen::Index j = 0; j < spec.k_continuous; ++j) {
      raw(i, j) = rng.next_symmetric();
    }
  }
  Eigen::MatrixXd design(spec.n, k);
  design.col(0).setOnes();
  design.rightCols(spec.k_continuous) = raw;

  // First binary draw: W directly, or the instrument Z.
  const Eigen::VectorXd p_first = bounded_probs(design, spec.treatment_coefs);
  Eigen::VectorXi first(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    first[i] = rng.next_unit() < p_first[i] ? 1 : 0;
  }

  Eigen::VectorXi w = first;
  std::optional<Eigen::VectorXi> z;
  if (spec.instrumented) {
    z = first;
    Eigen::MatrixXd design_z(spec.n, k + 1);
    design_z.leftCols(k) = design;
    design_z.col(k) = first.cast<double>();
    const Eigen::VectorXd p_w = bounded_probs(design_z, *spec.compliance_coefs);
    for (Eigen::Index i = 0; i < spec.n; ++i) {
      w[i] = rng.next_unit() < p_w[i] ? 1 : 0;
    }
  }

  Eigen::VectorXd y(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const Eigen::VectorXd& arm =
        w[i] ? spec.outcome_coefs_treated : spec.outcome_coefs_control;
    y[i] = design.row(i).dot(arm) + spec.noise_sd * rng.next_normal();
  }

  return Dataset::build(raw, w, y, z);
}

}  // namespace

Dataset generate(const DGPSpec& spec) {
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    try {
      return try_draw(spec, attempt);
    } catch (const RankDeficient&) {
    } catch (const DegenerateTreatment&) {
    }
  }
  throw DegenerateDraw("could not draw a valid dataset in 100 attempts");
}

DGPSpec s1_spec() {
  DGPSpec s;
  s.seed = 1;
  s.n = 200;
  s.k_continuous = 3;
  s.treatment_coefs = (Eigen::VectorXd(4) << 0.2, 0.9, -0.6, 0.4).finished();
  s.outcome_coefs_treated = (Eigen::VectorXd(4) << 2.0, 1.5, -1.0, 0.5).finished();
  s.outcome_coefs_control = (Eigen::VectorXd(4) << 1.0, 0.5, 0.5, -0.25).finished();
  s.noise_sd = 1.0;
  return s;
}

DGPSpec s2_spec() {
  DGPSpec s;
  s.seed = 2;
  s.n = 200;
  s.k_continuous = 3;
  s.treatment_coefs = (Eigen::VectorXd(4) << 0.1, 0.7, -0.5, 0.3).finished();
  s.outcome_coefs_treated = (Eigen::VectorXd(4) << 2.0, 1.0, -0.5, 0.75).finished();
  s.outcome_coefs_control = (Eigen::VectorXd(4) << 1.0, 0.25, 0.5, -0.5).finished();
  s.noise_sd = 1.0;
  s.instrumented = true;
  s.compliance_coefs = (Eigen::VectorXd(5) << -1.0, 0.3, 0.2, -0.2, 2.2).finished();
  return s;
}

Dataset make_s1() { return generate(s1_spec()); }
Dataset make_s2() { return generate(s2_spec()); }

DGPSpec corpus_spec(std::uint64_t seed, bool instrumented) {
  static const Eigen::Index sizes[] = {50, 100, 200, 500};
  DGPSpec s;
  s.seed = seed;
  s.n = sizes[seed % 4];
  s.k_continuous = 1 + static_cast<Eigen::Index>(seed % 5);
  const Eigen::Index k = s.k_continuous + 1;
  // Mild but nonzero confounding; signs alternate across covariates.
  s.treatment_coefs = Eigen::VectorXd(k);
  s.outcome_coefs_treated = Eigen::VectorXd(k);
  s.outcome_coefs_control = Eigen::VectorXd(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    // near-zero intercept keeps the arms balanced enough that the
    // balancing systems stay feasible even at n = 50, k = 6
    s.treatment_coefs[j] = j == 0 ? 0.1 : 0.5 * sign / static_cast<double>(j);
    s.outcome_coefs_treated[j] = 1.5 + sign * 0.8 / static_cast<double>(j + 1);
    s.outcome_coefs_control[j] = 0.5 - sign * 0.4 / static_cast<double>(j + 1);
  }
  s.noise_sd = 0.8;
  if (instrumented) {
    s.instrumented = true;
    Eigen::VectorXd c(k + 1);
    c.head(k) = 0.4 * s.treatment_coefs;
    c[0] = -1.0;
    c[k] = 2.2;
    s.compliance_coefs = c;
  }
  return s;
}

}  // namespace cbal
