// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include <omp.h>

#include <random>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "relialign/error.hpp"
#include "relialign/kernels.hpp"

namespace relialign::kernels {
namespace {

std::vector<AnswerGroup> random_groups(std::size_t n, std::mt19937_64& rng) {
  std::vector<AnswerGroup> groups;
  for (std::size_t i = 0; i < n; ++i) {
    AnswerGroup g{"q" + std::to_string(i), {}};
    const std::size_t k = 1 + rng() % 5;
    for (std::size_t j = 0; j < 5; ++j) g.answers.push_back(CanonicalValue::choice(rng() % k));
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<TrainingPair> random_pairs(std::size_t n, std::size_t v, std::mt19937_64& rng) {
  std::vector<TrainingPair> pairs;
  std::uniform_real_distribution<double> w(0.05, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    pairs.push_back({testing::random_tokens(1 + rng() % 3, v, rng),
                     testing::random_tokens(1 + rng() % 4, v, rng), w(rng)});
  return pairs;
}

TEST(ScoreAll, ParallelMatchesSerialExactly) {
  std::mt19937_64 rng(2);
  const auto groups = random_groups(3000, rng);
  const auto a = score_all(groups, 0.2, Exec::Serial);
  const auto b = score_all(groups, 0.2, Exec::Parallel);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].question_id, b[i].question_id);
    EXPECT_EQ(a[i].entropy, b[i].entropy);
    EXPECT_EQ(a[i].per_variant_weight, b[i].per_variant_weight);
  }
}

TEST(ScoreAll, ErrorsSurface) {
  std::vector<AnswerGroup> groups{{"ok", {CanonicalValue::choice(0)}}, {"empty", {}}};
  for (auto exec : {Exec::Serial, Exec::Parallel}) {
    try {
      score_all(groups, 0.2, exec);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyAnswerSet);
    }
  }
}

TEST(BatchGradient, ParallelAgreesWithSerial) {
  std::mt19937_64 rng(8);
  const auto model = testing::random_model(40, rng);
  const auto pairs = random_pairs(1000, 40, rng);
  std::vector<double> gs, gp;
  const double ls = batch_loss_and_gradient(model, pairs, gs, Exec::Serial);
  const double lp = batch_loss_and_gradient(model, pairs, gp, Exec::Parallel);
  EXPECT_NEAR(ls, lp, 1e-12);
  ASSERT_EQ(gs.size(), gp.size());
  for (std::size_t i = 0; i < gs.size(); ++i) EXPECT_NEAR(gs[i], gp[i], 1e-13);
}

TEST(BatchGradient, ParallelIsIndependentOfThreadCount) {
  std::mt19937_64 rng(12);
  const auto model = testing::random_model(25, rng);
  const auto pairs = random_pairs(700, 25, rng);
  const int before = omp_get_max_threads();
  std::vector<double> reference;
  double ref_loss = 0.0;
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    std::vector<double> g;
    const double loss = batch_loss_and_gradient(model, pairs, g, Exec::Parallel);
    if (reference.empty()) {
      reference = g;
      ref_loss = loss;
    } else {
      EXPECT_EQ(g, reference) << threads << " threads";
      EXPECT_EQ(loss, ref_loss);
    }
  }
  omp_set_num_threads(before);
}

TEST(BatchGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(14);
  const auto model = testing::random_model(6, rng);
  const auto pairs = random_pairs(200, 6, rng);
  std::vector<double> g;
  batch_loss_and_gradient(model, pairs, g, Exec::Parallel);
  const auto numeric = testing::numeric_gradient(model, [&](const ToyModel& m) {
    std::vector<double> scratch;
    return batch_loss_and_gradient(m, pairs, scratch, Exec::Serial);
  });
  EXPECT_LT(testing::max_relative_error(g, numeric), 1e-4);
}

}  // namespace
}  // namespace relialign::kernels
