// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relialign/question.hpp"

namespace relialign {

/// One perturbed prompt x_i for a question.
struct PromptVariant {
  std::string question_id;
  std::size_t variant_index = 0;
  std::string rendered_prompt;
  /// decode_map[display position] = original choice index. Empty means the
  /// identity mapping (generation questions).
  std::vector<std::size_t> decode_map;
  /// Set when the paraphrase source ran dry and this prompt repeats a template.
  bool padded = false;

  /// Original choice index shown under `letter`, if the letter is on display.
  std::optional<std::size_t> decode(char letter) const;
  /// Displayed letter of an original choice index.
  std::optional<char> display_of(std::size_t original_index) const;
};

enum class ParaphraseSource { ExternalProvider, RuleBased };

struct VariationPlan {
  std::size_t n_variants = 5;
  std::uint64_t seed = 0;
  ParaphraseSource paraphrase_source = ParaphraseSource::RuleBased;
};

/// Source of rewrites for generation questions. Implementations return up to
/// `count` rewrites of `stem`; fewer is allowed and is padded by the caller.
class ParaphraseProvider {
 public:
  virtual ~ParaphraseProvider() = default;
  virtual std::vector<std::string> rewrite(std::string_view stem, std::size_t count,
                                           std::uint64_t seed) = 0;
};

/// Deterministic template rewrites: politeness prefixes, sentence reordering
/// and instruction suffixes. Never drops a token of the stem.
class RuleBasedParaphraser final : public ParaphraseProvider {
 public:
  std::vector<std::string> rewrite(std::string_view stem, std::size_t count,
                                   std::uint64_t seed) override;

  /// Every distinct non-identity rewrite, in seeded order.
  static std::vector<std::string> candidates(std::string_view stem, std::uint64_t seed);
};

/// n! saturated at UINT64_MAX.
std::uint64_t permutation_count(std::size_t n) noexcept;

std::string render_multiple_choice(const Question& question,
                                   std::span<const std::size_t> display_order);
std::string render_generation(std::string_view stem);

/// Variant 0 is the identity order; the rest are distinct non-identity
/// permutations drawn without replacement from a generator seeded by
/// (plan.seed, question.id).
std::vector<PromptVariant> generate_choice_permutations(const Question& question,
                                                        const VariationPlan& plan);

/// Variant 0 is the unmodified prompt. Shortfalls from the provider are padded
/// by cycling rule-based templates and flagged on the variant.
std::vector<PromptVariant> generate_paraphrases(const Question& question,
                                                const VariationPlan& plan,
                                                ParaphraseProvider& provider);

/// Dispatches on question kind. `external` is used for generation questions
/// when the plan asks for ExternalProvider.
std::vector<PromptVariant> generate_variants(const Question& question, const VariationPlan& plan,
                                             ParaphraseProvider* external = nullptr);

}  // namespace relialign
