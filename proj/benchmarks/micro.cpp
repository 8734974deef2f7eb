// Microbenchmarks for the proximal operators and the solver iteration.
#include <benchmark/benchmark.h>

#include <random>

#include "firstorder/problems.hpp"
#include "firstorder/prox.hpp"
#include "firstorder/solvers.hpp"

using namespace firstorder;

namespace {

Vec random_vec(Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

void BM_prox_l1(benchmark::State& state) {
  Vec v = random_vec(state.range(0), 0);
  for (auto _ : state) benchmark::DoNotOptimize(prox_l1(v, 0.3));
}
BENCHMARK(BM_prox_l1)->Arg(100)->Arg(10000);

void BM_prox_group_l21(benchmark::State& state) {
  const Index n = state.range(0);
  Vec v = random_vec(n, 1);
  std::vector<std::vector<Index>> groups;
  for (Index i = 0; i < n; i += 10) {
    groups.emplace_back();
    for (Index j = i; j < std::min(i + 10, n); ++j) groups.back().push_back(j);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(prox_group_l21(v, 0.3, groups));
}
BENCHMARK(BM_prox_group_l21)->Arg(100)->Arg(10000);

void BM_project_l1_ball(benchmark::State& state) {
  Vec v = random_vec(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_l1_ball(v, 1.0));
}
BENCHMARK(BM_project_l1_ball)->Arg(100)->Arg(10000);

void BM_prox_l1inf(benchmark::State& state) {
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(state.range(0), 8);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = gauss(rng);
  for (auto _ : state) benchmark::DoNotOptimize(prox_l1inf(m, 0.3));
}
BENCHMARK(BM_prox_l1inf)->Arg(20)->Arg(200);

void BM_prox_trace_norm(benchmark::State& state) {
  std::mt19937 rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat m(state.range(0), state.range(0));
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = gauss(rng);
  for (auto _ : state) benchmark::DoNotOptimize(prox_trace_norm(m, 0.3));
}
BENCHMARK(BM_prox_trace_norm)->Arg(15)->Arg(60);

void BM_estimate_norm(benchmark::State& state) {
  std::mt19937 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(state.range(0), state.range(0));
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) a(i, j) = gauss(rng);
  LinearOperator op = make_matrix_operator(a);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_norm(op));
}
BENCHMARK(BM_estimate_norm)->Arg(50)->Arg(200);

void BM_pdcp_iteration(benchmark::State& state) {
  SyntheticDataConfig cfg;
  cfg.n_samples = 50;
  cfg.n_features = 40;
  cfg.n_groups = 8;
  ProblemSpec p = build_feature_selection(cfg, 1e-3);
  SolverConfig sc;
  sc.max_iters = state.range(0);
  sc.record_every = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(pdcp_solve(p.saddle, sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_pdcp_iteration)->Arg(100);

void BM_pdcp_online_iteration(benchmark::State& state) {
  SyntheticDataConfig cfg;
  cfg.n_samples = 50;
  cfg.n_features = 40;
  cfg.n_groups = 8;
  ProblemSpec p = build_feature_selection(cfg, 1e-3);
  SolverConfig sc;
  sc.max_iters = state.range(0);
  sc.record_every = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(pdcp_online_solve(p.saddle, sc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_pdcp_online_iteration)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
