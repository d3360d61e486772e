#include <random>

#include <benchmark/benchmark.h>

#include "cpvf/realizer.hpp"

using namespace cpvf;

namespace {

Polynomial sample(int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> a(d - 1);
  for (auto& x : a) x = {g(rng), g(rng)};
  return Polynomial(d, a);
}

void BM_BuildGraph(benchmark::State& st) {
  Polynomial p = sample(static_cast<int>(st.range(0)), 7);
  auto eqs = roots(p).equilibria;
  for (auto _ : st) benchmark::DoNotOptimize(build_graph(p, eqs));
}

void BM_BuildGraphSerial(benchmark::State& st) {
  Polynomial p = sample(static_cast<int>(st.range(0)), 7);
  auto eqs = roots(p).equilibria;
  for (auto _ : st) benchmark::DoNotOptimize(build_graph_serial(p, eqs));
}

struct Fixture {
  Polynomial p;
  DiskModel m;
  InvariantData data;
  explicit Fixture(int d) : p(sample(d, 11)) {
    auto eqs = roots(p).equilibria;
    m = decompose(build_graph(p, eqs));
    data = compute_invariants(p, m);
  }
};

void BM_PseudoInvariants(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(pseudo_invariants(f.p, f.data));
}

void BM_PseudoInvariantsSerial(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(pseudo_invariants_serial(f.p, f.data));
}

void BM_Jacobian(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  RootChart chart(root_specs(f.p));
  for (auto _ : st) benchmark::DoNotOptimize(pseudo_jacobian(chart, f.data));
}

void BM_JacobianSerial(benchmark::State& st) {
  Fixture f(static_cast<int>(st.range(0)));
  RootChart chart(root_specs(f.p));
  for (auto _ : st) benchmark::DoNotOptimize(pseudo_jacobian_serial(chart, f.data));
}

}  // namespace

BENCHMARK(BM_BuildGraph)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildGraphSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PseudoInvariants)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PseudoInvariantsSerial)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Jacobian)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobianSerial)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
