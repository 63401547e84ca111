// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/variation.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "relialign/error.hpp"
#include "relialign/random.hpp"

namespace relialign {

namespace {

// Above this many permutations we sample by rejection instead of enumerating.
constexpr std::uint64_t kEnumerationLimit = 40320;  // 8!

bool ends_with_terminal(std::string_view text) {
  return !text.empty() && (text.back() == '.' || text.back() == '?' || text.back() == '!');
}

std::string letter_list(std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out += ',';
    out += display_letter(i);
  }
  return out;
}

template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t take, Rng& rng) {
  take = std::min(take, items.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + uniform_below(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

std::vector<std::vector<std::size_t>> sample_permutations(std::size_t n_choices,
                                                          std::size_t wanted, Rng& rng) {
  const auto identity = identity_order(n_choices);
  if (permutation_count(n_choices) <= kEnumerationLimit) {
    std::vector<std::vector<std::size_t>> pool;
    auto perm = identity;
    while (std::next_permutation(perm.begin(), perm.end())) pool.push_back(perm);
    partial_shuffle(pool, wanted, rng);
    pool.resize(wanted);
    return pool;
  }
  std::set<std::vector<std::size_t>> seen{identity};
  std::vector<std::vector<std::size_t>> out;
  while (out.size() < wanted) {
    auto perm = identity;
    partial_shuffle(perm, perm.size(), rng);
    if (seen.insert(perm).second) out.push_back(std::move(perm));
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    current += text[i];
    const bool terminal = text[i] == '.' || text[i] == '?' || text[i] == '!';
    if (terminal && (i + 1 == text.size() || text[i + 1] == ' ')) {
      out.push_back(current);
      current.clear();
      while (i + 1 < text.size() && text[i + 1] == ' ') ++i;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

constexpr std::array<std::string_view, 6> kPrefixes = {
    "",
    "Please answer the following question.",
    "Here is a question for you.",
    "Consider the following problem carefully.",
    "Kindly work through this.",
    "Read the question below and answer it.",
};

constexpr std::array<std::string_view, 4> kSuffixes = {
    "",
    "Give the final answer first.",
    "State your answer clearly.",
    "Keep the reasoning brief.",
};

}  // namespace

std::optional<std::size_t> PromptVariant::decode(char letter) const {
  if (letter < 'A' || letter > 'Z') return std::nullopt;
  const auto position = static_cast<std::size_t>(letter - 'A');
  if (position >= decode_map.size()) return std::nullopt;
  return decode_map[position];
}

std::optional<char> PromptVariant::display_of(std::size_t original_index) const {
  for (std::size_t pos = 0; pos < decode_map.size(); ++pos)
    if (decode_map[pos] == original_index) return display_letter(pos);
  return std::nullopt;
}

std::uint64_t permutation_count(std::size_t n) noexcept {
  std::uint64_t total = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (total > std::numeric_limits<std::uint64_t>::max() / k)
      return std::numeric_limits<std::uint64_t>::max();
    total *= k;
  }
  return total;
}

std::string render_multiple_choice(const Question& question,
                                   std::span<const std::size_t> display_order) {
  std::ostringstream out;
  out << "### Instruction: The following are multiple choice questions";
  if (question.subject && !question.subject->empty()) out << " about " << *question.subject;
  out << ". In your response, choose an answer from " << letter_list(display_order.size())
      << ", and provide a brief explanation on your answer. ### Question: " << question.stem;
  if (!ends_with_terminal(question.stem)) out << '.';
  for (std::size_t pos = 0; pos < display_order.size(); ++pos) {
    const auto& text = question.choices.at(display_order[pos]);
    out << ' ' << display_letter(pos) << ". " << text;
    if (!ends_with_terminal(text)) out << '.';
  }
  out << " ### Answer:";
  return out.str();
}

std::string render_generation(std::string_view stem) {
  std::string out =
      "### Instruction: Answer the following question. In your response, provide the final "
      "answer in the first line, and then provide a brief explanation in the second line. "
      "### Question: ";
  out += stem;
  out += " ### Answer:";
  return out;
}

std::vector<PromptVariant> generate_choice_permutations(const Question& question,
                                                        const VariationPlan& plan) {
  if (question.choices.empty())
    fail(ErrorCode::EmptyChoices, "question '" + question.id + "' has no choices");
  require(question.is_multiple_choice(), "choice permutations need a multiple-choice question");
  require(plan.n_variants >= 1, "n_variants must be at least 1");
  const auto available = permutation_count(question.choices.size());
  if (plan.n_variants > available)
    fail(ErrorCode::TooManyVariants,
         "question '" + question.id + "' has only " + std::to_string(available) +
             " orderings, asked for " + std::to_string(plan.n_variants));

  Rng rng(derive_seed(plan.seed, question.id));
  std::vector<std::vector<std::size_t>> orders{identity_order(question.choices.size())};
  for (auto& perm : sample_permutations(question.choices.size(), plan.n_variants - 1, rng))
    orders.push_back(std::move(perm));

  std::vector<PromptVariant> variants;
  variants.reserve(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    PromptVariant v;
    v.question_id = question.id;
    v.variant_index = i;
    v.rendered_prompt = render_multiple_choice(question, orders[i]);
    v.decode_map = std::move(orders[i]);
    variants.push_back(std::move(v));
  }
  return variants;
}

std::vector<std::string> RuleBasedParaphraser::candidates(std::string_view stem,
                                                          std::uint64_t seed) {
  const auto sentences = split_sentences(stem);
  std::vector<std::vector<std::string>> orderings{sentences};
  if (sentences.size() >= 2) {
    orderings.emplace_back(sentences.rbegin(), sentences.rend());
    auto rotated = sentences;
    std::rotate(rotated.rbegin(), rotated.rbegin() + 1, rotated.rend());
    orderings.push_back(std::move(rotated));
  }

  const std::string original(stem);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen{original};
  for (const auto& prefix : kPrefixes)
    for (const auto& order : orderings)
      for (const auto& suffix : kSuffixes) {
        auto text = join({std::string(prefix), join(order), std::string(suffix)});
        if (seen.insert(text).second) out.push_back(std::move(text));
      }

  Rng rng(derive_seed(seed, stem));
  partial_shuffle(out, out.size(), rng);
  return out;
}

std::vector<std::string> RuleBasedParaphraser::rewrite(std::string_view stem, std::size_t count,
                                                       std::uint64_t seed) {
  auto all = candidates(stem, seed);
  if (all.size() > count) all.resize(count);
  return all;
}

std::vector<PromptVariant> generate_paraphrases(const Question& question,
                                                const VariationPlan& plan,
                                                ParaphraseProvider& provider) {
  require(!question.is_multiple_choice(), "paraphrases need a generation question");
  require(plan.n_variants >= 1, "n_variants must be at least 1");
  const std::size_t wanted = plan.n_variants - 1;

  std::vector<std::string> stems{question.stem};
  std::vector<bool> padded{false};
  std::unordered_set<std::string> seen{question.stem};
  if (wanted > 0) {
    for (auto& text : provider.rewrite(question.stem, wanted, plan.seed)) {
      if (stems.size() > wanted) break;
      if (!text.empty() && seen.insert(text).second) {
        stems.push_back(std::move(text));
        padded.push_back(false);
      }
    }
  }
  if (stems.size() <= wanted) {
    // Pad from the template pool; cycle through it again if even that runs dry.
    const auto pool = RuleBasedParaphraser::candidates(question.stem, plan.seed);
    std::vector<std::string> fresh;
    for (const auto& text : pool)
      if (!seen.count(text)) fresh.push_back(text);
    const auto& cycle = fresh.empty() ? pool : fresh;
    for (std::size_t k = 0; stems.size() <= wanted; ++k) {
      stems.push_back(cycle.empty() ? question.stem : cycle[k % cycle.size()]);
      padded.push_back(true);
    }
  }

  std::vector<PromptVariant> variants;
  for (std::size_t i = 0; i < stems.size(); ++i) {
    PromptVariant v;
    v.question_id = question.id;
    v.variant_index = i;
    v.rendered_prompt = render_generation(stems[i]);
    v.padded = padded[i];
    variants.push_back(std::move(v));
  }
  return variants;
}

std::vector<PromptVariant> generate_variants(const Question& question, const VariationPlan& plan,
                                             ParaphraseProvider* external) {
  if (question.is_multiple_choice()) return generate_choice_permutations(question, plan);
  if (plan.paraphrase_source == ParaphraseSource::ExternalProvider) {
    if (external == nullptr)
      fail(ErrorCode::ProviderUnavailable, "no external paraphrase provider configured");
    return generate_paraphrases(question, plan, *external);
  }
  RuleBasedParaphraser rules;
  return generate_paraphrases(question, plan, rules);
}

}  // namespace relialign
