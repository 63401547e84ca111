// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace relialign {

/// Canonical form of one answer. Two raw supervisor outputs count as the same
/// prediction exactly when their canonical values compare equal.
///
/// Order: choice indices ascending, then texts lexicographically, then the
/// unparseable marker last.
class CanonicalValue {
 public:
  static CanonicalValue choice(std::size_t index) { return CanonicalValue(Storage(index)); }
  static CanonicalValue text(std::string normalized) {
    return CanonicalValue(Storage(std::move(normalized)));
  }
  static CanonicalValue unparseable() { return CanonicalValue(Storage(Unparseable{})); }

  bool is_choice() const noexcept { return storage_.index() == 0; }
  bool is_text() const noexcept { return storage_.index() == 1; }
  bool is_unparseable() const noexcept { return storage_.index() == 2; }

  std::size_t choice_index() const { return std::get<0>(storage_); }
  const std::string& text_value() const { return std::get<1>(storage_); }

  /// "A".."Z" for choices (original order), the text itself, or "<unparseable>".
  std::string label() const;

  friend bool operator==(const CanonicalValue& a, const CanonicalValue& b) {
    return a.storage_ == b.storage_;
  }
  friend bool operator<(const CanonicalValue& a, const CanonicalValue& b) {
    return a.storage_ < b.storage_;
  }

 private:
  struct Unparseable {
    friend bool operator==(Unparseable, Unparseable) { return true; }
    friend bool operator<(Unparseable, Unparseable) { return false; }
  };
  using Storage = std::variant<std::size_t, std::string, Unparseable>;

  explicit CanonicalValue(Storage storage) : storage_(std::move(storage)) {}

  Storage storage_;
};

enum class QuestionKind { MultipleChoice, Generation };
enum class Split { Train, Val, Test };

inline constexpr std::size_t kMinChoices = 2;
inline constexpr std::size_t kMaxChoices = 26;

struct Question {
  std::string id;
  QuestionKind kind = QuestionKind::MultipleChoice;
  std::string stem;
  std::vector<std::string> choices;
  std::optional<CanonicalValue> gold;
  std::optional<std::string> subject;
  Split split = Split::Val;

  bool is_multiple_choice() const noexcept { return kind == QuestionKind::MultipleChoice; }

  /// Throws ParseError describing the first violated invariant.
  void validate() const;
};

char display_letter(std::size_t position);

}  // namespace relialign
