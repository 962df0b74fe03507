#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "cbal/dataset.hpp"

namespace cbal {

// Counter-based 64-bit generator (splitmix update), written out so every
// platform reproduces identical fixtures bit for bit.
class SplitMixRng {
 public:
  explicit SplitMixRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  // Standard normal via Box-Muller; first uniform shifted into (0, 1].
  double next_normal();

 private:
  std::uint64_t state_;
};

struct DGPSpec {
  std::uint64_t seed = 1;
  Eigen::Index n = 200;
  Eigen::Index k_continuous = 3;
  Eigen::VectorXd treatment_coefs;  // length K = k_continuous + 1; index for W (or Z)
  Eigen::VectorXd outcome_coefs_treated;   // length K
  Eigen::VectorXd outcome_coefs_control;   // length K
  double noise_sd = 1.0;
  bool instrumented = false;
  std::optional<Eigen::VectorXd> compliance_coefs;  // length K + 1, last entry on Z
};

// Deterministic in spec. Covariates i.i.d. uniform(-1,1); treatment (or
// instrument, then treatment) Bernoulli from the logistic index with the
// index coefficients halved until every implied probability lies inside
// (0.02, 0.98); outcome linear per arm plus Gaussian noise.
// Throws DegenerateDraw after 100 failed redraws.
Dataset generate(const DGPSpec& spec);

// The two canonical seeded fixtures.
DGPSpec s1_spec();  // confounded treatment, no instrument
DGPSpec s2_spec();  // instrumented treatment
Dataset make_s1();
Dataset make_s2();

// Corpus spec used by the property suites: seed picks n/k cycling through
// {50,100,200,500} x {1..5 continuous covariates}.
DGPSpec corpus_spec(std::uint64_t seed, bool instrumented);

}  // namespace cbal
