// OpenMP kernels against their serial references.
//   mflab_bench --benchmark_filter=Eval

#include <benchmark/benchmark.h>
#include <omp.h>

#include "mflab/correl.hpp"
#include "mflab/hudson.hpp"
#include "mflab/multfun.hpp"

namespace {

using namespace mflab;

const SpfTable& table() {
  static const SpfTable t = build_spf_sieve(2'100'000);
  return t;
}

FunctionSpec kind(int i) {
  switch (i) {
    case 0:
      return FunctionSpec::liouville();
    case 1:
      return FunctionSpec::moebius();
    default:
      return FunctionSpec::twist(0.7);
  }
}

const char* kind_label(int i) { return i == 0 ? "liouville" : i == 1 ? "moebius" : "twist"; }

void BM_EvalParallel(benchmark::State& st) {
  const auto f = kind(static_cast<int>(st.range(0)));
  const auto hi = static_cast<std::uint64_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(evaluate_range(f, 1, hi, table()));
  st.SetLabel(kind_label(static_cast<int>(st.range(0))));
  st.SetItemsProcessed(st.iterations() * st.range(1));
}

void BM_EvalReference(benchmark::State& st) {
  const auto f = kind(static_cast<int>(st.range(0)));
  const auto hi = static_cast<std::uint64_t>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(reference::evaluate_range(f, 1, hi, table()));
  st.SetLabel(kind_label(static_cast<int>(st.range(0))));
  st.SetItemsProcessed(st.iterations() * st.range(1));
}

CorrelationSpec corr_spec(std::uint64_t x) {
  CorrelationSpec s;
  const auto lam = FunctionSpec::liouville();
  s.factors = {{lam, 1, 0, 1}, {lam, 1, 1, 1}, {lam, 1, 2, 1}};
  s.mode = AverageMode::log;
  s.x = x;
  s.nondegenerate = true;
  return s;
}

void BM_CorrelationParallel(benchmark::State& st) {
  const auto spec = corr_spec(static_cast<std::uint64_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(correlation(spec, table()));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_CorrelationReference(benchmark::State& st) {
  const auto spec = corr_spec(static_cast<std::uint64_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::correlation(spec, table()));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

// range(0) = threads; 1 is the serial baseline
void BM_HudsonClassification(benchmark::State& st) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(static_cast<int>(st.range(0)));
  ClassificationOptions opt;
  opt.deep_verify = true;
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_all_candidates(opt));
  omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_EvalParallel)->ArgsProduct({{0, 1, 2}, {1'000'000, 2'000'000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalReference)->ArgsProduct({{0, 1, 2}, {1'000'000, 2'000'000}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelationParallel)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelationReference)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HudsonClassification)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
