// Copyright 2026 the sscl authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "sscl/losses.hpp"
#include "sscl/membank.hpp"

namespace {

sscl::Mat random_mat(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  sscl::Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

void BM_InfoNce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sscl::Mat a = random_mat(n, 128, 1);
  const sscl::Mat b = random_mat(n, 128, 2);
  sscl::Mat da, db;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sscl::info_nce(a, b, 0.2, &da, &db));
  }
}
BENCHMARK(BM_InfoNce)->Arg(16)->Arg(64)->Arg(256);

void BM_BankContrastive(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  constexpr int kClasses = 5, kDim = 128;
  sscl::FeatureMap fm;
  fm.height = side;
  fm.width = side;
  fm.features = random_mat(side * side, kDim, 3);
  sscl::LabelMap lm;
  lm.height = side;
  lm.width = side;
  lm.ids.resize(side * side);
  for (int i = 0; i < side * side; ++i) lm.ids[i] = i % kClasses;
  std::vector<std::optional<sscl::Vec>> centroids;
  for (int c = 0; c < kClasses; ++c)
    centroids.emplace_back(random_mat(1, kDim, 10 + c).row(0).transpose());
  sscl::Mat grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sscl::bank_contrastive_loss(fm, lm, centroids, 0.07, &grad));
  }
}
BENCHMARK(BM_BankContrastive)->Arg(16)->Arg(32)->Arg(64);

void BM_NaiveElementwise(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  sscl::FeatureMap fm;
  fm.height = side;
  fm.width = side;
  fm.features = random_mat(side * side, 128, 4);
  sscl::LabelMap lm;
  lm.height = side;
  lm.width = side;
  lm.ids.resize(side * side);
  for (int i = 0; i < side * side; ++i) lm.ids[i] = i % 5;
  sscl::Mat grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sscl::elementwise_naive_loss(fm, lm, 0.07, &grad));
  }
}
BENCHMARK(BM_NaiveElementwise)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
