// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relialign/jsonl.hpp"
#include "relialign/question.hpp"
#include "relialign/scoring.hpp"

namespace relialign {

/// Fraction of positions where prediction == gold.
double accuracy(std::span<const CanonicalValue> predictions, std::span<const CanonicalValue> gold);

/// (w2s - weak) / (ceiling - weak); nullopt when ceiling <= weak.
std::optional<double> pgr(double weak, double w2s, double ceiling);
/// Three decimals, or "-" when undefined.
std::string format_pgr(const std::optional<double>& value);

enum class Method { Naive, FilteredSampled, Filtered, ReweightedSampled, Reweighted };
inline constexpr Method kAllMethods[] = {Method::Naive, Method::FilteredSampled, Method::Filtered,
                                         Method::ReweightedSampled, Method::Reweighted};
/// report.json key: naive, filtered_sampled, ...
std::string_view method_key(Method m) noexcept;
/// Table row label: "w2s naive", "w2s+filter.(s.)", ...
std::string_view method_label(Method m) noexcept;

struct EvalReport {
  double weak = 0.0;
  double ceiling = 0.0;
  /// Methods that were trained, in table order.
  std::vector<std::pair<Method, double>> w2s;

  void set(Method m, double acc);
  std::optional<double> accuracy_of(Method m) const;
  std::optional<double> pgr_of(Method m) const;
};

using GoldIndex = std::unordered_map<std::string, CanonicalValue>;
/// Gold answers of the questions that have one.
GoldIndex gold_index(std::span<const Question> questions);

struct EntropyBucket {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t questions = 0;
  /// (variant, answer) weak labels equal / not equal to gold.
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  /// Questions whose modal answer equals gold.
  std::size_t modal_correct = 0;

  std::optional<double> accuracy() const;
  std::optional<double> modal_accuracy() const;
};

struct EntropyBucketReport {
  std::vector<double> edges;
  std::vector<EntropyBucket> buckets;

  /// Bucket accuracies over occupied buckets never increase left to right.
  bool non_increasing() const;
};

/// Lowest canonical value among the answers with maximal count.
CanonicalValue modal_answer(const PredictionDistribution& dist);

/// Equal-width buckets over [0, ln N], N the largest answer count; each bucket
/// is [lo, hi) except the top one, which is closed.
EntropyBucketReport entropy_bucket_report(std::span<const ScoredQuestion> scored,
                                          const GoldIndex& gold, std::size_t bucket_count = 5);

struct ReliabilityCell {
  CanonicalValue answer;
  CanonicalValue gold;
  double mean_weight = 0.0;
  std::size_t count = 0;
};

struct ReliabilityMatrixReport {
  /// Sorted by (answer, gold).
  std::vector<ReliabilityCell> cells;
  std::size_t total = 0;
  /// Pair-weighted means over answer == gold and answer != gold.
  std::optional<double> diagonal_mean;
  std::optional<double> off_diagonal_mean;

  const ReliabilityCell* find(const CanonicalValue& answer, const CanonicalValue& gold) const;
};

ReliabilityMatrixReport reliability_matrix_report(std::span<const ScoredQuestion> scored,
                                                  const GoldIndex& gold);

Json eval_report_to_json(const EvalReport& report);
Json bucket_report_to_json(const EntropyBucketReport& report);
Json matrix_report_to_json(const ReliabilityMatrixReport& report);

/// report.json: {"eval": ..., "entropy_buckets": ..., "reliability_matrix": ...}.
Json full_report_json(const EvalReport& report, const EntropyBucketReport* buckets,
                      const ReliabilityMatrixReport* matrix);
std::string render_markdown(const EvalReport& report, const EntropyBucketReport* buckets,
                            const ReliabilityMatrixReport* matrix);

}  // namespace relialign
