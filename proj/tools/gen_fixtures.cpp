// Writes the shipped CSV fixtures: the tiny saturated example d4.csv and
// the two seeded synthetic datasets s1.csv / s2.csv.

#include <iostream>
#include <string>

#include "cbal/csv.hpp"
#include "cbal/dgp.hpp"

namespace {

cbal::CsvTable to_table(const cbal::Dataset& d) {
  cbal::CsvTable t;
  const auto n = d.n();
  for (Eigen::Index j = 1; j < d.k(); ++j) {
    t.columns.push_back("x" + std::to_string(j));
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = d.covariates()(i, j);
    t.data.push_back(std::move(col));
  }
  t.columns.push_back("w");
  t.columns.push_back("y");
  std::vector<double> w(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = d.treatment()[i];
    y[static_cast<std::size_t>(i)] = d.outcome()[i];
  }
  t.data.push_back(std::move(w));
  t.data.push_back(std::move(y));
  if (d.has_instrument()) {
    t.columns.push_back("z");
    std::vector<double> z(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = d.instrument()[i];
    t.data.push_back(std::move(z));
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";

  Eigen::MatrixXd x4(4, 1);
  x4 << 0, 0, 1, 1;
  Eigen::VectorXi w4(4);
  w4 << 0, 1, 0, 1;
  Eigen::VectorXd y4(4);
  y4 << 1, 2, 3, 5;
  const cbal::Dataset d4 = cbal::Dataset::build(x4, w4, y4);

  cbal::write_csv(dir + "/d4.csv", to_table(d4));
  cbal::write_csv(dir + "/s1.csv", to_table(cbal::make_s1()));
  cbal::write_csv(dir + "/s2.csv", to_table(cbal::make_s2()));

  // perfectly separated treatment, used to exercise the solver-error path
  Eigen::MatrixXd xs(4, 1);
  xs << 1, 1, 0, 0;
  Eigen::VectorXi ws(4);
  ws << 1, 1, 0, 0;
  Eigen::VectorXd ys(4);
  ys << 1, 2, 3, 4;
  cbal::write_csv(dir + "/sep.csv", to_table(cbal::Dataset::build(xs, ws, ys)));

  std::cout << "wrote d4.csv, s1.csv, s2.csv, sep.csv to " << dir << "\n";
  return 0;
}
