// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

// Serial vs OpenMP kernels. Run with --benchmark_filter to pick one.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "relialign/kernels.hpp"

namespace {

using relialign::CanonicalValue;
using relialign::TokenId;
using relialign::ToyModel;
using relialign::TrainingPair;
namespace kernels = relialign::kernels;

std::vector<kernels::AnswerGroup> make_groups(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<kernels::AnswerGroup> groups(n);
  for (std::size_t i = 0; i < n; ++i) {
    groups[i].question_id = "q" + std::to_string(i);
    for (int v = 0; v < 5; ++v) groups[i].answers.push_back(CanonicalValue::choice(rng() % 4));
  }
  return groups;
}

std::vector<TrainingPair> make_batch(std::size_t n, std::size_t vocab) {
  std::mt19937_64 rng(2);
  std::vector<TrainingPair> batch(n);
  for (auto& p : batch) {
    for (int t = 0; t < 12; ++t) p.prompt.push_back(static_cast<TokenId>(rng() % vocab));
    for (int t = 0; t < 3; ++t) p.completion.push_back(static_cast<TokenId>(rng() % vocab));
    p.weight = static_cast<double>(rng() % 1000) / 1000.0;
  }
  return batch;
}

void score_all(benchmark::State& state, kernels::Exec exec) {
  const auto groups = make_groups(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::score_all(groups, 0.2, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void batch_gradient(benchmark::State& state, kernels::Exec exec) {
  constexpr std::size_t vocab = 512;
  ToyModel model(vocab);
  const auto batch = make_batch(static_cast<std::size_t>(state.range(0)), vocab);
  std::vector<double> gradient;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::batch_loss_and_gradient(model, batch, gradient, exec));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK_CAPTURE(score_all, serial, kernels::Exec::Serial)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(score_all, parallel, kernels::Exec::Parallel)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(batch_gradient, serial, kernels::Exec::Serial)->Range(1 << 7, 1 << 12);
BENCHMARK_CAPTURE(batch_gradient, parallel, kernels::Exec::Parallel)->Range(1 << 7, 1 << 12);

}  // namespace

BENCHMARK_MAIN();
