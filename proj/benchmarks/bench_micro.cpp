#include <benchmark/benchmark.h>

#include <cmath>

#include "iscrc/bench.hpp"
#include "iscrc/compression.hpp"
#include "iscrc/kernel_hull.hpp"
#include "iscrc/solvers.hpp"
#include "iscrc/synthetic.hpp"

namespace {

using iscrc::FeatureMatrix;
using iscrc::Vector;

// Deterministic dense inputs without seeding overhead per iteration.
FeatureMatrix waves(Eigen::Index rows, Eigen::Index cols, double phase) {
  FeatureMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = std::sin(phase + 0.7 * static_cast<double>(i) +
                         1.3 * static_cast<double>(j));
    }
  }
  return m;
}

void BM_lasso(benchmark::State& state) {
  const Eigen::Index rows = state.range(0);
  const Eigen::Index cols = state.range(1);
  const FeatureMatrix X = waves(rows, cols, 0.1);
  const Vector t = waves(rows, 1, 0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iscrc::lasso_solve(X, t, 1e-3));
  }
}
BENCHMARK(BM_lasso)->Args({50, 20})->Args({100, 50})->Args({200, 100});

void BM_constrained_ridge(benchmark::State& state) {
  const FeatureMatrix Y = waves(100, 50, 0.2);
  const FeatureMatrix D = waves(100, state.range(0), 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iscrc::constrained_ridge_solve(Y, D, 1e-3, 1e-3));
  }
}
BENCHMARK(BM_constrained_ridge)->Arg(100)->Arg(400);

void BM_projection(benchmark::State& state) {
  const Vector v = waves(state.range(0), 1, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iscrc::project_capped_simplex(v, 0.2));
  }
}
BENCHMARK(BM_projection)->Arg(50)->Arg(500);

void BM_two_block_qp(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const FeatureMatrix A = waves(2 * n, 2 * n, 0.4);
  const FeatureMatrix H =
      (A.transpose() * A) / static_cast<double>(2 * n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(iscrc::solve_two_block_qp(H, n, 1.0));
  }
}
BENCHMARK(BM_two_block_qp)->Arg(15)->Arg(60);

const iscrc::SyntheticDataset& bench_dataset() {
  static const iscrc::SyntheticDataset data = [] {
    iscrc::SyntheticSpec spec;
    spec.classes = 5;
    spec.dim = 50;
    spec.subspace_dim = 3;
    spec.noise_sigma = 0.05;
    spec.frames_per_set = 20;
    spec.sets_per_class = 2;
    spec.seed = 1;
    return iscrc::generate_synthetic(spec);
  }();
  return data;
}

const iscrc::CompressedGalleryCollection& bench_gallery() {
  static const iscrc::CompressedGalleryCollection gallery = [] {
    iscrc::CompressionConfig config;
    config.atoms = 5;
    return iscrc::compress_gallery(bench_dataset().galleries, config);
  }();
  return gallery;
}

void BM_classify(benchmark::State& state) {
  const auto method = static_cast<iscrc::Method>(state.range(0));
  const auto& query = bench_dataset().queries.front().features;
  const iscrc::SolverConfig config;
  static iscrc::GramCache cache;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        iscrc::run_method(method, query, bench_gallery(), config, &cache));
  }
  state.SetLabel(iscrc::method_name(method));
}
BENCHMARK(BM_classify)
    ->Arg(static_cast<int>(iscrc::Method::rh_l1))
    ->Arg(static_cast<int>(iscrc::Method::rh_l2))
    ->Arg(static_cast<int>(iscrc::Method::kch))
    ->Arg(static_cast<int>(iscrc::Method::src))
    ->Arg(static_cast<int>(iscrc::Method::crc));

void BM_compress_class(benchmark::State& state) {
  const auto& samples = bench_dataset().galleries.front().features;
  iscrc::CompressionConfig config;
  config.atoms = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(iscrc::compress_class(samples, config));
  }
}
BENCHMARK(BM_compress_class)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
