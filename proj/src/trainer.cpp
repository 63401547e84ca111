// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/trainer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "relialign/error.hpp"
#include "relialign/kernels.hpp"
#include "relialign/random.hpp"

namespace relialign {

namespace {

constexpr std::string_view kQuestionMarker = "### Question:";
constexpr std::string_view kAnswerMarker = "### Answer:";
constexpr std::string_view kFirstChoice = " A. ";
constexpr std::size_t kParallelBatch = 2 * kernels::kGradientChunk;

std::vector<std::string> split_words(std::string_view text, bool strip_punct) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const auto start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    auto word = text.substr(start, i - start);
    if (strip_punct)
      while (!word.empty() && std::string_view(".,?!:;").find(word.back()) != std::string_view::npos)
        word.remove_suffix(1);
    if (!word.empty()) words.emplace_back(word);
  }
  return words;
}

kernels::Exec exec_for(std::size_t batch) {
  return batch >= kParallelBatch ? kernels::Exec::Parallel : kernels::Exec::Serial;
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  tokens_ = {"<unk>", "<eos>"};
  for (auto& t : tokens)
    if (t != tokens_[0] && t != tokens_[1]) tokens_.push_back(std::move(t));
  for (std::size_t i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], static_cast<TokenId>(i));
}

TokenId Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnknown : it->second;
}

std::vector<std::string> prompt_words(std::string_view prompt) {
  auto segment = prompt;
  if (const auto q = prompt.find(kQuestionMarker); q != std::string_view::npos) {
    segment = prompt.substr(q + kQuestionMarker.size());
    auto cut = segment.find(kFirstChoice);
    cut = std::min(cut, segment.find(kAnswerMarker));
    if (cut != std::string_view::npos) segment = segment.substr(0, cut);
  }
  return split_words(segment, true);
}

std::vector<std::string> completion_words(std::string_view completion) {
  return split_words(completion, false);
}

Vocabulary build_vocabulary(std::span<const WeightedExample> examples,
                            std::span<const std::string> extra_prompts) {
  std::set<std::string> tokens;
  for (const auto& e : examples) {
    for (auto& w : prompt_words(e.prompt)) tokens.insert(std::move(w));
    for (auto& w : completion_words(e.completion)) tokens.insert(std::move(w));
  }
  for (const auto& p : extra_prompts)
    for (auto& w : prompt_words(p)) tokens.insert(std::move(w));
  return Vocabulary({tokens.begin(), tokens.end()});
}

TokenSequence encode_prompt(const Vocabulary& vocab, std::string_view prompt) {
  TokenSequence out;
  for (const auto& w : prompt_words(prompt)) out.push_back(vocab.id(w));
  return out;
}

TokenSequence encode_completion(const Vocabulary& vocab, std::string_view completion) {
  TokenSequence out;
  for (const auto& w : completion_words(completion)) out.push_back(vocab.id(w));
  out.push_back(Vocabulary::kEnd);
  return out;
}

std::string decode_tokens(const Vocabulary& vocab, const TokenSequence& tokens) {
  std::string out;
  for (auto t : tokens) {
    if (!out.empty()) out += ' ';
    out += vocab.token(t);
  }
  return out;
}

ToyModel::ToyModel(std::size_t vocab_size)
    : vocab_size_(vocab_size), logits_((vocab_size + 1) * vocab_size, 0.0) {
  require(vocab_size > 0, "vocabulary must not be empty");
}

LossAndGradient clm_loss(const ToyModel& model, const TokenSequence& x, const TokenSequence& y) {
  LossAndGradient out;
  out.gradient.assign(model.logits().size(), 0.0);
  out.loss = kernels::accumulate_clm(model, x, y, 1.0, out.gradient);
  return out;
}

LossAndGradient reweighted_loss(const ToyModel& model, std::span<const TrainingPair> pairs) {
  LossAndGradient out;
  out.loss = kernels::batch_loss_and_gradient(model, pairs, out.gradient, exec_for(pairs.size()));
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    fail(ErrorCode::InvalidConfig, "learning rate must be positive");
  if (epochs == 0) fail(ErrorCode::InvalidConfig, "epochs must be positive");
  if (batch_size == 0) fail(ErrorCode::InvalidConfig, "batch size must be positive");
}

ToyModel train(ToyModel model, std::span<const TrainingPair> pairs, const TrainConfig& cfg,
               std::vector<TrainLogEntry>* log) {
  cfg.validate();
  if (pairs.empty()) fail(ErrorCode::EmptyBatch, "no training examples");
  for (const auto& p : pairs)
    require(p.weight >= 0.0 && std::isfinite(p.weight), "example weight must be finite and >= 0");

  std::vector<std::size_t> order(pairs.size());
  std::vector<TrainingPair> batch;
  std::vector<double> gradient;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(cfg.seed, epoch));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_below(rng, i)]);

    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const auto end = std::min(order.size(), begin + cfg.batch_size);
      batch.clear();
      for (auto i = begin; i < end; ++i) batch.push_back(pairs[order[i]]);
      const double loss =
          kernels::batch_loss_and_gradient(model, batch, gradient, exec_for(batch.size()));
      if (!std::isfinite(loss))
        fail(ErrorCode::NonFiniteLoss, "loss diverged at step " + std::to_string(step));
      auto& w = model.logits();
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= cfg.learning_rate * gradient[k];
      if (log) log->push_back({step, epoch, loss});
      ++step;
    }
  }
  for (double v : model.logits())
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteLoss, "parameters diverged");
  return model;
}

TokenSequence predict(const ToyModel& model, const TokenSequence& x, std::size_t max_len,
                      std::optional<TokenId> end_token) {
  TokenSequence out;
  auto state = model.context_after(x);
  while (out.size() < max_len) {
    const auto row = model.row(state);
    const auto best = static_cast<TokenId>(std::max_element(row.begin(), row.end()) - row.begin());
    if (end_token && best == *end_token) break;
    out.push_back(best);
    state = best;
  }
  return out;
}

std::vector<TrainingPair> encode_examples(const Vocabulary& vocab,
                                          std::span<const WeightedExample> examples) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(examples.size());
  for (const auto& e : examples)
    pairs.push_back({encode_prompt(vocab, e.prompt), encode_completion(vocab, e.completion), e.weight});
  return pairs;
}

TrainedModel train_on_examples(std::span<const WeightedExample> examples, const TrainConfig& cfg,
                               std::span<const std::string> eval_prompts,
                               std::vector<TrainLogEntry>* log) {
  if (examples.empty()) fail(ErrorCode::EmptyTrainingSet, "no training examples");
  TrainedModel out;
  out.vocab = build_vocabulary(examples, eval_prompts);
  const auto pairs = encode_examples(out.vocab, examples);
  out.model = train(ToyModel(out.vocab.size()), pairs, cfg, log);
  return out;
}

std::string predict_completion(const TrainedModel& trained, std::string_view prompt,
                               std::size_t max_len) {
  return decode_tokens(trained.vocab,
                       predict(trained.model, encode_prompt(trained.vocab, prompt), max_len));
}

Json model_to_json(const TrainedModel& trained) {
  Json j;
  j["vocab"] = trained.vocab.tokens();
  j["vocab_size"] = trained.model.vocab_size();
  j["logits"] = trained.model.logits();
  return j;
}

TrainedModel model_from_json(const Json& j) {
  try {
    auto tokens = j.at("vocab").get<std::vector<std::string>>();
    const auto v = j.at("vocab_size").get<std::size_t>();
    auto logits = j.at("logits").get<std::vector<double>>();
    if (tokens.size() != v || tokens.size() < 2 || tokens[0] != "<unk>" || tokens[1] != "<eos>")
      fail(ErrorCode::ParseError, "model vocabulary is malformed");
    if (logits.size() != (v + 1) * v) fail(ErrorCode::ParseError, "model logits have the wrong size");
    TrainedModel out;
    out.vocab = Vocabulary(std::vector<std::string>(tokens.begin() + 2, tokens.end()));
    if (out.vocab.tokens() != tokens) fail(ErrorCode::ParseError, "model vocabulary is not sorted");
    out.model = ToyModel(v);
    out.model.logits() = std::move(logits);
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("model: ") + e.what());
  }
}

}  // namespace relialign
