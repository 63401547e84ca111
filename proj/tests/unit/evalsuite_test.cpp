// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "relialign/error.hpp"
#include "relialign/evalsuite.hpp"

namespace relialign {
namespace {

CanonicalValue c(std::size_t i) { return CanonicalValue::choice(i); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

TEST(Accuracy, Counting) {
  const std::vector<CanonicalValue> gold{c(0), c(1), c(2), c(3), c(0), c(1), c(2), c(3)};
  EXPECT_EQ(accuracy(gold, gold), 1.0);
  std::vector<CanonicalValue> none;
  for (const auto& g : gold) none.push_back(c(g.choice_index() + 1));
  EXPECT_EQ(accuracy(none, gold), 0.0);
  auto three = none;
  three[0] = gold[0];
  three[4] = gold[4];
  three[7] = gold[7];
  EXPECT_EQ(accuracy(three, gold), 0.375);
}

TEST(Accuracy, Errors) {
  const std::vector<CanonicalValue> a{c(0)}, b{c(0), c(1)};
  EXPECT_EQ(code_of([&] { accuracy(a, b); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([&] { accuracy({}, {}); }), ErrorCode::PreconditionViolation);
}

TEST(Pgr, PublishedRow) {
  const auto v = pgr(0.801, 0.842, 0.902);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v, 0.406, 5e-4);
  EXPECT_NEAR(*v, 0.403, 0.01);
}

TEST(Pgr, ZeroGapAndUndefined) {
  EXPECT_EQ(pgr(0.5, 0.5, 0.9), 0.0);
  EXPECT_FALSE(pgr(0.894, 0.9, 0.891).has_value());
  EXPECT_FALSE(pgr(0.7, 0.8, 0.7).has_value());
  EXPECT_EQ(format_pgr(std::nullopt), "-");
  EXPECT_EQ(format_pgr(0.40594), "0.406");
  EXPECT_EQ(code_of([] { pgr(1.2, 0.5, 0.9); }), ErrorCode::PreconditionViolation);
}

TEST(Pgr, AffineInvarianceAndSign) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double weak = u(rng), w2s = u(rng), ceiling = u(rng);
    const auto p = pgr(weak, w2s, ceiling);
    if (!p) {
      EXPECT_LE(ceiling, weak);
      continue;
    }
    EXPECT_EQ(w2s > weak, *p > 0.0);
    const double a = 0.1 + 0.8 * u(rng), b = (1.0 - a) * u(rng);
    const auto q = pgr(a * weak + b, a * w2s + b, a * ceiling + b);
    ASSERT_TRUE(q.has_value());
    EXPECT_NEAR(*q, *p, 1e-9 * std::max(1.0, std::abs(*p)));
  }
}

ScoredQuestion scored(const std::string& id, std::vector<CanonicalValue> answers) {
  return score_question(id, std::move(answers), 0.2);
}

TEST(EntropyBuckets, UnanimousCorrect) {
  std::vector<ScoredQuestion> s;
  GoldIndex gold;
  for (int i = 0; i < 6; ++i) {
    const auto id = "q" + std::to_string(i);
    s.push_back(scored(id, std::vector<CanonicalValue>(5, c(i % 4))));
    gold.emplace(id, c(i % 4));
  }
  const auto r = entropy_bucket_report(s, gold, 5);
  ASSERT_EQ(r.buckets.size(), 5u);
  EXPECT_EQ(r.buckets[0].questions, 6u);
  EXPECT_EQ(r.buckets[0].accuracy(), 1.0);
  EXPECT_EQ(r.buckets[0].modal_accuracy(), 1.0);
  for (std::size_t b = 1; b < 5; ++b) EXPECT_EQ(r.buckets[b].questions, 0u);
  EXPECT_TRUE(r.non_increasing());
}

TEST(EntropyBuckets, BoundaryValuesGoRight) {
  std::vector<ScoredQuestion> s;
  GoldIndex gold;
  const double top = std::log(5.0);
  // Stub entropies at every edge: [lo, hi) except the closed top bucket.
  for (int b = 0; b <= 5; ++b) {
    auto q = scored("q" + std::to_string(b), {c(0), c(1), c(2), c(3), c(4)});
    q.entropy = top * b / 5.0;
    gold.emplace(q.question_id, c(0));
    s.push_back(q);
  }
  const auto r = entropy_bucket_report(s, gold, 5);
  EXPECT_EQ(r.buckets[0].questions, 1u);
  EXPECT_EQ(r.buckets[1].questions, 1u);
  EXPECT_EQ(r.buckets[2].questions, 1u);
  EXPECT_EQ(r.buckets[3].questions, 1u);
  EXPECT_EQ(r.buckets[4].questions, 2u);
  for (std::size_t i = 1; i < r.edges.size(); ++i) EXPECT_GT(r.edges[i], r.edges[i - 1]);
  EXPECT_EQ(r.edges.back(), top);
}

TEST(EntropyBuckets, PartitionAndPairCounts) {
  std::mt19937_64 rng(6);
  std::vector<ScoredQuestion> s;
  GoldIndex gold;
  for (int i = 0; i < 400; ++i) {
    std::vector<CanonicalValue> a;
    for (int j = 0; j < 5; ++j) a.push_back(c(rng() % 4));
    const auto id = "q" + std::to_string(i);
    gold.emplace(id, c(rng() % 4));
    s.push_back(scored(id, a));
  }
  const auto r = entropy_bucket_report(s, gold, 7);
  std::size_t qs = 0, pairs = 0;
  for (const auto& b : r.buckets) {
    qs += b.questions;
    pairs += b.correct + b.incorrect;
    EXPECT_EQ(b.correct + b.incorrect, 5 * b.questions);
  }
  EXPECT_EQ(qs, 400u);
  EXPECT_EQ(pairs, 2000u);
}

TEST(EntropyBuckets, ModalTieTakesTheLowestValue) {
  const auto s = scored("q", {c(2), c(1), c(2), c(1), c(0)});
  EXPECT_EQ(modal_answer(s.distribution), c(1));
  GoldIndex gold{{"q", c(2)}};
  const std::vector<ScoredQuestion> v{s};
  const auto r = entropy_bucket_report(v, gold);
  std::size_t modal = 0;
  for (const auto& b : r.buckets) modal += b.modal_correct;
  EXPECT_EQ(modal, 0u);
}

TEST(EntropyBuckets, MissingGold) {
  const std::vector<ScoredQuestion> s{scored("q", {c(0)})};
  EXPECT_EQ(code_of([&] { entropy_bucket_report(s, {}); }), ErrorCode::MissingGold);
  EXPECT_EQ(code_of([&] { reliability_matrix_report(s, {}); }), ErrorCode::MissingGold);
}

TEST(ReliabilityMatrix, PerfectSupervisorIsDiagonal) {
  std::vector<ScoredQuestion> s;
  GoldIndex gold;
  for (int i = 0; i < 8; ++i) {
    const auto id = "q" + std::to_string(i);
    s.push_back(scored(id, std::vector<CanonicalValue>(5, c(i % 4))));
    gold.emplace(id, c(i % 4));
  }
  const auto r = reliability_matrix_report(s, gold);
  EXPECT_EQ(r.cells.size(), 4u);
  for (const auto& cell : r.cells) {
    EXPECT_EQ(cell.answer, cell.gold);
    EXPECT_EQ(cell.mean_weight, 1.0);
  }
  EXPECT_EQ(r.total, 40u);
  EXPECT_FALSE(r.off_diagonal_mean.has_value());
}

TEST(ReliabilityMatrix, MajorityCellOutweighsMinority) {
  const std::vector<ScoredQuestion> s{scored("q", {c(0), c(0), c(1)})};
  const GoldIndex gold{{"q", c(0)}};
  const auto r = reliability_matrix_report(s, gold);
  const auto* aa = r.find(c(0), c(0));
  const auto* ba = r.find(c(1), c(0));
  ASSERT_NE(aa, nullptr);
  ASSERT_NE(ba, nullptr);
  EXPECT_EQ(aa->count, 2u);
  EXPECT_EQ(ba->count, 1u);
  const double hi = std::exp(2.0 / 3.0 / 0.2), lo = std::exp(1.0 / 3.0 / 0.2);
  EXPECT_NEAR(aa->mean_weight, hi / (hi + lo), 1e-12);
  EXPECT_NEAR(ba->mean_weight, lo / (hi + lo), 1e-12);
  EXPECT_GT(aa->mean_weight, ba->mean_weight);
  EXPECT_EQ(r.total, 3u);
}

TEST(Reports, UndefinedPgrIsADash) {
  EvalReport report;
  report.weak = 0.9;
  report.ceiling = 0.85;
  report.set(Method::Reweighted, 0.88);
  report.set(Method::Naive, 0.87);
  const auto j = eval_report_to_json(report);
  EXPECT_EQ(j["pgr"]["reweighted"], "-");
  EXPECT_EQ(j["pgr"]["naive"], "-");
  EXPECT_EQ(j["accuracy"]["ceiling"], 0.85);
  const auto md = render_markdown(report, nullptr, nullptr);
  EXPECT_NE(md.find("| w2s naive | 0.870 | - |"), std::string::npos) << md;
  EXPECT_NE(md.find("| strong ceiling | 0.850 | |"), std::string::npos);
  EXPECT_LT(md.find("w2s naive"), md.find("w2s+rew."));
}

TEST(Reports, DefinedPgrIsANumber) {
  EvalReport report;
  report.weak = 0.5;
  report.ceiling = 1.0;
  report.set(Method::Filtered, 0.75);
  const auto j = full_report_json(report, nullptr, nullptr);
  EXPECT_EQ(j["eval"]["pgr"]["filtered"], 0.5);
  EXPECT_TRUE(j["entropy_buckets"].is_null());
}

}  // namespace
}  // namespace relialign
