// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/question.hpp"

#include "relialign/error.hpp"
#include "relialign/scoring.hpp"

namespace relialign {

std::string CanonicalValue::label() const {
  if (is_choice()) return std::string(1, display_letter(choice_index()));
  if (is_text()) return text_value();
  return "<unparseable>";
}

char display_letter(std::size_t position) {
  require(position < kMaxChoices, "display position out of range");
  return static_cast<char>('A' + position);
}

void Question::validate() const {
  auto bad = [this](const std::string& what) {
    fail(ErrorCode::ParseError, "question '" + id + "': " + what);
  };
  if (id.empty()) fail(ErrorCode::ParseError, "question with empty id");
  if (kind == QuestionKind::MultipleChoice) {
    if (choices.size() < kMinChoices || choices.size() > kMaxChoices)
      bad("multiple-choice questions need 2..26 choices");
    if (gold && (!gold->is_choice() || gold->choice_index() >= choices.size()))
      bad("gold is not a valid choice index");
  } else {
    if (!choices.empty()) bad("generation questions take no choices");
    if (gold) {
      if (!gold->is_text()) bad("generation gold must be an answer string");
      const auto normalized = normalize_generation_answer(gold->text_value());
      if (!normalized || *normalized != gold->text_value())
        bad("generation gold is not in canonical form");
    }
  }
}

}  // namespace relialign
