// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relialign/question.hpp"

namespace relialign {

struct RawAnswer;
struct PromptVariant;

struct CanonicalAnswer {
  CanonicalValue value = CanonicalValue::unparseable();
  std::string raw_text;
};

/// Leading displayed letter: optional whitespace, one of A-Z, then a word
/// boundary.
std::optional<char> extract_choice_letter(std::string_view text);

/// First line, trimmed, lower-cased, whitespace collapsed. If it holds a
/// numeral, the first numeral without thousands separators, currency or
/// percent sign; otherwise the normalized line. nullopt for an empty line.
std::optional<std::string> normalize_generation_answer(std::string_view text);

CanonicalAnswer canonicalize(const RawAnswer& raw, const Question& question,
                             const PromptVariant& variant);

/// Empirical distribution over the distinct canonical answers, support in
/// order of first appearance.
struct PredictionDistribution {
  std::string question_id;
  std::vector<CanonicalValue> support;
  std::vector<std::size_t> counts;
  std::vector<double> probs;
  std::size_t n = 0;

  std::optional<std::size_t> index_of(const CanonicalValue& value) const;
};

PredictionDistribution empirical_distribution(std::span<const CanonicalValue> answers,
                                              std::string question_id = {});

/// Shannon entropy in nats; 0 ln 0 = 0.
double entropy_score(const PredictionDistribution& dist);

struct ThresholdPolicy {
  double percentile = 50.0;
  double temperature = 0.2;

  void validate() const;
};

/// Nearest-rank percentile: ascending sort, 1-based index ceil(p/100 * n).
double select_threshold(std::span<const double> entropies, const ThresholdPolicy& policy);

/// Temperature softmax over the support probabilities, looked up per variant.
std::vector<double> reliability_weights(const PredictionDistribution& dist,
                                        std::span<const CanonicalValue> answers,
                                        double temperature);

struct ScoredQuestion {
  std::string question_id;
  PredictionDistribution distribution;
  /// Canonical answer of each variant, aligned with variant_index.
  std::vector<CanonicalValue> answers;
  double entropy = 0.0;
  std::vector<double> per_variant_weight;
  bool retained = false;

  std::size_t n() const noexcept { return answers.size(); }
};

ScoredQuestion score_question(std::string question_id, std::vector<CanonicalValue> answers,
                              double temperature);

/// Marks retained = (entropy <= tau). Ties at tau are kept.
std::vector<ScoredQuestion> filter_by_uncertainty(std::vector<ScoredQuestion> scored,
                                                  double tau);

}  // namespace relialign
