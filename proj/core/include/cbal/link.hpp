#pragma once

#include <cmath>

namespace cbal {

struct LinkEval {
  double prob;   // p = exp(z) / (1 + exp(z))
  double dprob;  // p * (1 - p)
};

// Overflow-safe logistic link. For z >= 0 uses 1/(1+exp(-z)), for z < 0
// uses exp(z)/(1+exp(z)), so exp never sees a positive argument. dprob is
// e/(1+e)^2 with e = exp(-|z|), which survives where p*(1-p) would round
// to zero.
inline LinkEval logistic(double index) {
  const double e = std::exp(-std::abs(index));
  const double q = e / (1.0 + e);          // min(p, 1-p), fully accurate
  const double p = index >= 0.0 ? 1.0 - q : q;
  return LinkEval{p, q * (1.0 - q)};
}

}  // namespace cbal
