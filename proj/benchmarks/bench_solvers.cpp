#include <benchmark/benchmark.h>

#include "cbal/dgp.hpp"
#include "cbal/diagnostics.hpp"
#include "cbal/estimators.hpp"

namespace {

cbal::Dataset corpus(std::uint64_t seed) {
  return cbal::generate(cbal::corpus_spec(seed, false));
}

void BM_FitMle(benchmark::State& state) {
  const cbal::Dataset d = corpus(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbal::fit_mle(d));
  }
}
BENCHMARK(BM_FitMle)->Arg(2)->Arg(3);

void BM_FitIptTreated(benchmark::State& state) {
  const cbal::Dataset d = corpus(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbal::fit_ipt_treated(d));
  }
}
BENCHMARK(BM_FitIptTreated)->Arg(2)->Arg(3);

void BM_FitCbpsAte(benchmark::State& state) {
  const cbal::Dataset d = corpus(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cbal::fit_cbps_ate(d));
  }
}
BENCHMARK(BM_FitCbpsAte)->Arg(2)->Arg(3);

void BM_AuditAte(benchmark::State& state) {
  const cbal::Dataset d = corpus(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cbal::equivalence_audit(d, cbal::Estimand::ate, cbal::PSMethod::ipt_treated));
  }
}
BENCHMARK(BM_AuditAte)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
