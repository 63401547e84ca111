// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "relialign/corpus.hpp"
#include "relialign/jsonl.hpp"

namespace relialign {

using TokenId = std::uint32_t;
using TokenSequence = std::vector<TokenId>;

class Vocabulary {
 public:
  static constexpr TokenId kUnknown = 0;
  static constexpr TokenId kEnd = 1;

  Vocabulary();
  /// Specials first, then the given tokens sorted and deduplicated.
  explicit Vocabulary(std::vector<std::string> tokens);

  TokenId id(std::string_view token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// Words of the question segment of a prompt: the text after "### Question:"
/// up to the choice list (" A. ") or "### Answer:", trailing punctuation
/// stripped. Prompts without the marker use their whole text.
std::vector<std::string> prompt_words(std::string_view prompt);
std::vector<std::string> completion_words(std::string_view completion);

Vocabulary build_vocabulary(std::span<const WeightedExample> examples,
                            std::span<const std::string> extra_prompts = {});
TokenSequence encode_prompt(const Vocabulary& vocab, std::string_view prompt);
/// Completion words followed by the end marker.
TokenSequence encode_completion(const Vocabulary& vocab, std::string_view completion);
std::string decode_tokens(const Vocabulary& vocab, const TokenSequence& tokens);

/// Bigram logits table. Row s holds the next-token logits after previous
/// token s; row V is the start state.
class ToyModel {
 public:
  ToyModel() = default;
  explicit ToyModel(std::size_t vocab_size);

  std::size_t vocab_size() const noexcept { return vocab_size_; }
  std::size_t context_states() const noexcept { return vocab_size_ + 1; }
  std::size_t start_state() const noexcept { return vocab_size_; }
  std::size_t context_after(const TokenSequence& prefix) const {
    return prefix.empty() ? start_state() : prefix.back();
  }

  std::span<double> row(std::size_t state) {
    return {logits_.data() + state * vocab_size_, vocab_size_};
  }
  std::span<const double> row(std::size_t state) const {
    return {logits_.data() + state * vocab_size_, vocab_size_};
  }
  std::vector<double>& logits() noexcept { return logits_; }
  const std::vector<double>& logits() const noexcept { return logits_; }

 private:
  std::size_t vocab_size_ = 0;
  std::vector<double> logits_;
};

/// (x, y, weight) in token space.
struct TrainingPair {
  TokenSequence prompt;
  TokenSequence completion;
  double weight = 1.0;
};

struct LossAndGradient {
  double loss = 0.0;
  /// Same layout as ToyModel::logits().
  std::vector<double> gradient;
};

/// Mean negative log-likelihood of the completion tokens given the prompt.
/// Prompt tokens only condition.
LossAndGradient clm_loss(const ToyModel& model, const TokenSequence& x, const TokenSequence& y);

/// (1/N) sum_i w_i * L_CLM(x_i, y_i).
LossAndGradient reweighted_loss(const ToyModel& model, std::span<const TrainingPair> pairs);

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 3;
  std::size_t batch_size = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainLogEntry {
  std::size_t step = 0;
  std::size_t epoch = 0;
  double loss = 0.0;
};

/// Mini-batch gradient descent on the re-weighted loss; the batch mean uses
/// the batch size as N. Shuffles once per epoch with a seeded generator.
ToyModel train(ToyModel model, std::span<const TrainingPair> pairs, const TrainConfig& cfg,
               std::vector<TrainLogEntry>* log = nullptr);

/// Greedy decoding; ties go to the lowest id. Stops before `end_token` or
/// after max_len tokens.
TokenSequence predict(const ToyModel& model, const TokenSequence& x, std::size_t max_len,
                      std::optional<TokenId> end_token = Vocabulary::kEnd);

struct TrainedModel {
  Vocabulary vocab;
  ToyModel model;
};

std::vector<TrainingPair> encode_examples(const Vocabulary& vocab,
                                          std::span<const WeightedExample> examples);

/// Builds the vocabulary (including `eval_prompts`), encodes and trains.
TrainedModel train_on_examples(std::span<const WeightedExample> examples, const TrainConfig& cfg,
                               std::span<const std::string> eval_prompts = {},
                               std::vector<TrainLogEntry>* log = nullptr);

/// Completion text predicted for a prompt.
std::string predict_completion(const TrainedModel& trained, std::string_view prompt,
                               std::size_t max_len = 8);

Json model_to_json(const TrainedModel& trained);
TrainedModel model_from_json(const Json& j);

}  // namespace relialign
