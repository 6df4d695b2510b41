#include <hcurl/cholesky.hpp>
#include <hcurl/experiment.hpp>
#include <hcurl/multilevel.hpp>
#include <hcurl/splitting.hpp>

#include <benchmark/benchmark.h>

using namespace hcurl;

namespace {

const ProblemInstance& problem(int level) {
  static std::vector<ProblemInstance> cache;
  for (auto& p : cache)
    if (static_cast<int>(p.meshes.meshes.size()) == level + 1) return p;
  ExperimentConfig c;
  c.family = Family::jump;
  cache.push_back(make_problem(c, level));
  return cache.back();
}

void BM_spmv(benchmark::State& state) {
  const auto& a = problem(static_cast<int>(state.range(0))).system.A;
  const Vector x(static_cast<std::size_t>(a.cols()), 1.0);
  Vector y(static_cast<std::size_t>(a.rows()));
  for (auto _ : state) {
    spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * a.nnz());
}

void BM_galerkin(benchmark::State& state) {
  const auto& p = problem(static_cast<int>(state.range(0)));
  const auto h = build_hierarchy(p.system, Method::ref, {}, &p.meshes);
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_product(h.levels[0].P, h.levels[0].A));
}

void BM_cholesky(benchmark::State& state) {
  const auto& a = problem(static_cast<int>(state.range(0))).system.A;
  for (auto _ : state) benchmark::DoNotOptimize(cholesky(a));
}

void BM_algebraic_splitting(benchmark::State& state) {
  const auto& s = problem(static_cast<int>(state.range(0))).system;
  for (auto _ : state) benchmark::DoNotOptimize(build_algebraic_splitting(s.A, s.G));
}

void BM_vcycle(benchmark::State& state) {
  const auto& p = problem(static_cast<int>(state.range(0)));
  const auto h = build_hierarchy(p.system, static_cast<Method>(state.range(1)), {}, &p.meshes);
  const Vector b = experiment_rhs(p.system.size());
  Vector x(b.size(), 0.0);
  for (auto _ : state) {
    vcycle(h, b, x);
    benchmark::DoNotOptimize(x.data());
  }
}

void BM_setup(benchmark::State& state) {
  const auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(build_hierarchy(p.system, static_cast<Method>(state.range(1)), {}, &p.meshes));
}

} // namespace

BENCHMARK(BM_spmv)->DenseRange(3, 6);
BENCHMARK(BM_galerkin)->DenseRange(3, 5);
BENCHMARK(BM_cholesky)->DenseRange(3, 5);
BENCHMARK(BM_algebraic_splitting)->DenseRange(3, 5);
BENCHMARK(BM_vcycle)->ArgsProduct({{3, 4, 5}, {0, 1, 2}});
BENCHMARK(BM_setup)->ArgsProduct({{3, 4, 5}, {0, 1, 2}})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
