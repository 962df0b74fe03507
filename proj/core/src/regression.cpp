#include "cbal/regression.hpp"

#include <cmath>
#include <vector>

namespace cbal {

namespace {

bool in_subgroup(const Dataset& d, Subgroup s, Eigen::Index i) {
  return (d.treatment()[i] == 1) == (s == Subgroup::treated);
}

CoefVector solve_ls(const Dataset& d, Subgroup subgroup, Weighting weighting,
                    const std::vector<Eigen::Index>& rows,
                    const Eigen::VectorXd& row_weights) {
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index k = d.k();
  if (m < k) {
    throw RankDeficientSubgroup("subgroup has fewer usable rows than coefficients");
  }
  Eigen::MatrixXd a(m, k);
  Eigen::VectorXd b(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double sw = std::sqrt(row_weights[r]);
    a.row(r) = sw * d.covariates().row(rows[static_cast<size_t>(r)]);
    b[r] = sw * d.outcome()[rows[static_cast<size_t>(r)]];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    throw RankDeficientSubgroup("weighted subgroup design is rank deficient");
  }
  return CoefVector{qr.solve(b), subgroup, weighting, m};
}

}  // namespace

CoefVector fit_ols(const Dataset& d, Subgroup subgroup) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (in_subgroup(d, subgroup, i)) rows.push_back(i);
  }
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(rows.size()));
  return solve_ls(d, subgroup, Weighting::unweighted, rows, w);
}

CoefVector fit_wls(const Dataset& d, Subgroup subgroup,
                   const Eigen::VectorXd& unit_weights, Weighting weighting) {
  if (unit_weights.size() != d.n()) {
    throw LengthMismatch("unit_weights length must equal the sample size");
  }
  std::vector<Eigen::Index> rows;
  std::vector<double> w;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    if (unit_weights[i] < 0.0) {
      throw NegativeWeight("unit weights must be nonnegative");
    }
    if (unit_weights[i] > 0.0 && !in_subgroup(d, subgroup, i)) {
      throw NegativeWeight("positive weight on a unit outside the subgroup");
    }
    if (unit_weights[i] > 0.0) {
      rows.push_back(i);
      w.push_back(unit_weights[i]);
    }
  }
  return solve_ls(d, subgroup, weighting, rows,
                  Eigen::Map<const Eigen::VectorXd>(w.data(),
                                                    static_cast<Eigen::Index>(w.size())));
}

}  // namespace cbal
