#include "cbal/dataset.hpp"

#include <Eigen/SVD>

namespace cbal {

namespace {

void check_binary(const Eigen::VectorXi& v, const char* name) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && v[i] != 1) {
      throw LengthMismatch(std::string(name) + " entries must be 0 or 1");
    }
  }
}

}  // namespace

Dataset Dataset::build(const Eigen::MatrixXd& raw_covariates,
                       const Eigen::VectorXi& treatment,
                       const Eigen::VectorXd& outcome,
                       std::optional<Eigen::VectorXi> instrument) {
  const Eigen::Index n = treatment.size();
  if (n < 2) {
    throw LengthMismatch("need at least two units");
  }
  if (raw_covariates.rows() != n || outcome.size() != n ||
      (instrument && instrument->size() != n)) {
    throw LengthMismatch("covariates, treatment, outcome and instrument must have equal length");
  }
  check_binary(treatment, "treatment");
  if (instrument) check_binary(*instrument, "instrument");

  const Eigen::Index n1 = treatment.sum();
  if (n1 == 0 || n1 == n) {
    throw DegenerateTreatment("all units share one treatment status");
  }
  if (instrument) {
    const int z1 = instrument->sum();
    if (z1 == 0 || z1 == n) {
      throw DegenerateTreatment("all units share one instrument value");
    }
  }

  Eigen::MatrixXd x(n, raw_covariates.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(raw_covariates.cols()) = raw_covariates;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (x.rows() < x.cols() || sv(sv.size() - 1) <= 1e-10 * sv(0)) {
    throw RankDeficient("covariate matrix (with intercept) is rank deficient");
  }

  Dataset d;
  d.covariates_ = std::move(x);
  d.treatment_ = treatment;
  d.outcome_ = outcome;
  d.instrument_ = std::move(instrument);
  d.n_treated_ = n1;
  return d;
}

Dataset Dataset::with_outcome(const Eigen::VectorXd& outcome) const {
  if (outcome.size() != n()) {
    throw LengthMismatch("replacement outcome has wrong length");
  }
  Dataset d(*this);
  d.outcome_ = outcome;
  return d;
}

Dataset Dataset::instrument_as_treatment(const Eigen::VectorXd& outcome) const {
  if (!instrument_) {
    throw LengthMismatch("dataset has no instrument");
  }
  if (outcome.size() != n()) {
    throw LengthMismatch("replacement outcome has wrong length");
  }
  Dataset d;
  d.covariates_ = covariates_;
  d.treatment_ = *instrument_;
  d.outcome_ = outcome;
  d.n_treated_ = d.treatment_.sum();
  return d;
}

MeanVector mean_covariates(const Dataset& d, Population population) {
  const Eigen::Index n = d.n();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d.k());
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool in = false;
    switch (population) {
      case Population::all: in = true; break;
      case Population::treated: in = d.treatment()[i] == 1; break;
      case Population::control: in = d.treatment()[i] == 0; break;
      case Population::z1:
        in = d.has_instrument() && d.instrument()[i] == 1;
        break;
      case Population::z0:
        in = d.has_instrument() && d.instrument()[i] == 0;
        break;
    }
    if (in) {
      sum += d.covariates().row(i).transpose();
      ++count;
    }
  }
  if (count == 0) {
    throw EmptyPopulation("selected population is empty");
  }
  return MeanVector{sum / static_cast<double>(count), population};
}

}  // namespace cbal
