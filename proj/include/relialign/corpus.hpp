// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "relialign/jsonl.hpp"
#include "relialign/question.hpp"
#include "relialign/scoring.hpp"
#include "relialign/supervisor.hpp"
#include "relialign/variation.hpp"

namespace relialign {

struct DatasetBundle {
  std::vector<Question> train;
  std::vector<Question> val;
  std::vector<Question> test;

  std::size_t size() const noexcept { return train.size() + val.size() + test.size(); }
  /// train, then val, then test.
  std::vector<Question> all() const;
};

DatasetBundle load_questions(const std::filesystem::path& path);
void save_questions(const std::filesystem::path& path, const DatasetBundle& bundle);

/// The (x_i, a_i, S_prob) unit handed to the trainer.
struct WeightedExample {
  std::string question_id;
  std::size_t variant_index = 0;
  std::string prompt;
  std::string completion;
  double weight = 1.0;
};

enum class EmitMode {
  Naive,       // variant 0 only, weight 1
  Filtered,    // every variant of retained questions, weight 1
  Reweighted,  // every variant of every question, weight S_prob
  Gold,        // variant 0 with the gold answer, weight 1 (strong ceiling)
};

EmitMode parse_emit_mode(std::string_view name);
std::string_view to_string(EmitMode mode) noexcept;

/// Training target for a canonical answer: the choice text for multiple
/// choice, the normalized answer for generation.
std::string render_completion(const CanonicalValue& value, const Question& question);

std::vector<WeightedExample> emit_weighted_sft(std::span<const ScoredQuestion> scored,
                                               std::span<const PromptVariant> variants,
                                               std::span<const Question> questions,
                                               EmitMode mode);

/// Uniform sample without replacement of min(budget, size) examples, kept in
/// their original order.
std::vector<WeightedExample> sample_to_budget(std::span<const WeightedExample> examples,
                                              std::size_t budget, std::uint64_t seed);

// --- record schemas -------------------------------------------------------

std::string_view to_string(Split split) noexcept;
std::string_view to_string(QuestionKind kind) noexcept;

Json canonical_to_json(const CanonicalValue& value);
CanonicalValue canonical_from_json(const Json& j);

Json question_to_json(const Question& q);
Question question_from_json(const Json& j);

Json variant_to_json(const PromptVariant& v);
PromptVariant variant_from_json(const Json& j);

Json answer_to_json(const RawAnswer& a);
RawAnswer answer_from_json(const Json& j);

Json scored_to_json(const ScoredQuestion& s, double tau);
ScoredQuestion scored_from_json(const Json& j);

Json example_to_json(const WeightedExample& e);
WeightedExample example_from_json(const Json& j);

}  // namespace relialign
