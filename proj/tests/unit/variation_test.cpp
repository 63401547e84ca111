// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "relialign/error.hpp"
#include "relialign/variation.hpp"

namespace relialign {
namespace {

Question mc(std::size_t n_choices, std::string id = "q1") {
  Question q;
  q.id = std::move(id);
  q.kind = QuestionKind::MultipleChoice;
  q.stem = "Pick the right option";
  for (std::size_t i = 0; i < n_choices; ++i) q.choices.push_back("choice" + std::to_string(i));
  q.gold = CanonicalValue::choice(0);
  return q;
}

Question gen(std::string stem) {
  Question q;
  q.id = "g1";
  q.kind = QuestionKind::Generation;
  q.stem = std::move(stem);
  q.gold = CanonicalValue::text("12");
  return q;
}

std::vector<std::size_t> order_of(const PromptVariant& v, std::size_t n) {
  if (v.decode_map.empty()) {
    std::vector<std::size_t> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;
    return id;
  }
  return v.decode_map;
}

std::multiset<std::string> words(const std::string& text) {
  std::multiset<std::string> out;
  std::istringstream in(text);
  for (std::string w; in >> w;) {
    while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) w.pop_back();
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    if (!w.empty()) out.insert(w);
  }
  return out;
}

TEST(ChoicePermutations, SingleVariantIsIdentity) {
  VariationPlan plan;
  plan.n_variants = 1;
  const auto vs = generate_choice_permutations(mc(4), plan);
  ASSERT_EQ(vs.size(), 1u);
  for (char letter = 'A'; letter <= 'D'; ++letter)
    EXPECT_EQ(vs[0].decode(letter), static_cast<std::size_t>(letter - 'A'));
  EXPECT_FALSE(vs[0].decode('E').has_value());
}

TEST(ChoicePermutations, CorrectLetterFollowsTheMovedChoice) {
  // Original index 0 shown third.
  PromptVariant v;
  v.decode_map = {1, 2, 0, 3};
  EXPECT_EQ(v.display_of(0), 'C');
  EXPECT_EQ(v.decode('C'), 0u);
}

TEST(ChoicePermutations, ThreeChoicesSixVariantsCoverAllOrders) {
  std::set<std::vector<std::size_t>> all;
  std::vector<std::size_t> p{0, 1, 2};
  do all.insert(p);
  while (std::next_permutation(p.begin(), p.end()));

  for (std::uint64_t seed : {0ull, 1ull, 99ull, 123456789ull}) {
    VariationPlan plan;
    plan.n_variants = 6;
    plan.seed = seed;
    std::set<std::vector<std::size_t>> got;
    for (const auto& v : generate_choice_permutations(mc(3), plan)) got.insert(order_of(v, 3));
    EXPECT_EQ(got, all) << "seed " << seed;
  }
}

TEST(ChoicePermutations, TooManyVariants) {
  VariationPlan plan;
  plan.n_variants = 7;
  try {
    generate_choice_permutations(mc(3), plan);
    FAIL() << "expected TooManyVariants";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyVariants);
  }
}

TEST(ChoicePermutations, EmptyChoices) {
  auto q = mc(4);
  q.choices.clear();
  try {
    generate_choice_permutations(q, VariationPlan{});
    FAIL() << "expected EmptyChoices";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyChoices);
  }
}

TEST(ChoicePermutations, RenderedLettersDecodeToTheTextShown) {
  VariationPlan plan;
  plan.n_variants = 5;
  for (std::size_t n : {2u, 4u, 6u, 9u, 26u}) {
    const auto q = mc(n, "q" + std::to_string(n));
    const auto vs = generate_choice_permutations(q, {std::min<std::size_t>(5, permutation_count(n)), 7,
                                                     ParaphraseSource::RuleBased});
    std::set<std::vector<std::size_t>> distinct;
    for (const auto& v : vs) {
      const auto order = order_of(v, n);
      distinct.insert(order);
      std::vector<std::size_t> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(sorted[i], i);
      for (std::size_t pos = 0; pos < n; ++pos) {
        const char letter = display_letter(pos);
        const auto original = v.decode(letter);
        ASSERT_TRUE(original.has_value());
        const std::string shown = std::string(" ") + letter + ". " + q.choices[*original] + ".";
        EXPECT_NE(v.rendered_prompt.find(shown), std::string::npos) << shown;
        EXPECT_EQ(v.display_of(*original), letter);
      }
    }
    EXPECT_EQ(distinct.size(), vs.size());
    EXPECT_EQ(order_of(vs[0], n), order_of(generate_choice_permutations(q, {1, 0, {}})[0], n));
  }
}

TEST(ChoicePermutations, SeedDeterminism) {
  VariationPlan plan;
  plan.n_variants = 5;
  plan.seed = 42;
  const auto a = generate_choice_permutations(mc(5), plan);
  const auto b = generate_choice_permutations(mc(5), plan);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].rendered_prompt, b[i].rendered_prompt);
    EXPECT_EQ(a[i].decode_map, b[i].decode_map);
    EXPECT_EQ(a[i].variant_index, i);
  }
}

TEST(ChoicePermutations, PromptLayout) {
  auto q = mc(2);
  q.subject = "trivia";
  q.choices = {"Yes", "No"};
  const auto v = generate_choice_permutations(q, {1, 0, {}})[0];
  EXPECT_EQ(v.rendered_prompt,
            "### Instruction: The following are multiple choice questions about trivia. In your "
            "response, choose an answer from A,B, and provide a brief explanation on your answer. "
            "### Question: Pick the right option. A. Yes. B. No. ### Answer:");
}

TEST(Paraphrases, SingleVariantIsTheOriginal) {
  const auto q = gen("Tom has 5 apples and buys 7 more. How many apples does he have?");
  RuleBasedParaphraser rules;
  const auto vs = generate_paraphrases(q, {1, 3, ParaphraseSource::RuleBased}, rules);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].rendered_prompt, render_generation(q.stem));
  EXPECT_TRUE(vs[0].decode_map.empty());
}

TEST(Paraphrases, RuleBasedIsAPureFunction) {
  const auto q = gen("Tom has 5 apples and buys 7 more. How many apples does he have?");
  RuleBasedParaphraser rules;
  const auto a = generate_paraphrases(q, {5, 11, {}}, rules);
  const auto b = generate_paraphrases(q, {5, 11, {}}, rules);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].rendered_prompt, b[i].rendered_prompt);
}

TEST(Paraphrases, FiveDistinctPromptsKeepEveryStemWord) {
  for (const std::string stem :
       {"Tom has 5 apples and buys 7 more. How many apples does he have?",
        "What is 12 times 3?", "A shirt costs $20 and is discounted by 25%. What is the new price?"}) {
    const auto q = gen(stem);
    RuleBasedParaphraser rules;
    const auto vs = generate_paraphrases(q, {5, 3, {}}, rules);
    ASSERT_EQ(vs.size(), 5u);
    std::set<std::string> prompts;
    const auto stem_words = words(stem);
    for (const auto& v : vs) {
      prompts.insert(v.rendered_prompt);
      EXPECT_FALSE(v.padded);
      const auto got = words(v.rendered_prompt);
      for (const auto& w : stem_words)
        EXPECT_GE(got.count(w), stem_words.count(w)) << "lost '" << w << "' in " << v.rendered_prompt;
    }
    EXPECT_EQ(prompts.size(), 5u);
  }
}

class ShortProvider final : public ParaphraseProvider {
 public:
  std::vector<std::string> rewrite(std::string_view stem, std::size_t, std::uint64_t) override {
    return {"Restated: " + std::string(stem)};
  }
};

TEST(Paraphrases, ShortfallIsPaddedAndFlagged) {
  const auto q = gen("What is 12 times 3?");
  ShortProvider provider;
  const auto vs = generate_paraphrases(q, {4, 0, ParaphraseSource::ExternalProvider}, provider);
  ASSERT_EQ(vs.size(), 4u);
  EXPECT_FALSE(vs[0].padded);
  EXPECT_FALSE(vs[1].padded);
  EXPECT_EQ(vs[1].rendered_prompt, render_generation("Restated: What is 12 times 3?"));
  EXPECT_TRUE(vs[2].padded);
  EXPECT_TRUE(vs[3].padded);
}

TEST(Variants, ExternalWithoutProvider) {
  try {
    generate_variants(gen("What is 2 plus 2?"), {3, 0, ParaphraseSource::ExternalProvider});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProviderUnavailable);
  }
}

TEST(Variants, PermutationCountSaturates) {
  EXPECT_EQ(permutation_count(0), 1u);
  EXPECT_EQ(permutation_count(4), 24u);
  EXPECT_EQ(permutation_count(20), 2432902008176640000ull);
  EXPECT_EQ(permutation_count(26), UINT64_MAX);
}

}  // namespace
}  // namespace relialign
