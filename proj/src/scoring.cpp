// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "relialign/error.hpp"
#include "relialign/supervisor.hpp"
#include "relialign/variation.hpp"

namespace relialign {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string first_line_normalized(std::string_view text) {
  const auto eol = text.find('\n');
  if (eol != std::string_view::npos) text = text.substr(0, eol);
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Length of a currency sign at `pos` ($, or UTF-8 euro/pound/yen), else 0.
std::size_t currency_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return 0;
  if (s[pos] == '$') return 1;
  for (std::string_view sign : {"\xE2\x82\xAC", "\xC2\xA3", "\xC2\xA5"})
    if (s.substr(pos, sign.size()) == sign) return sign.size();
  return 0;
}

// Canonical digits of the numeral starting at `start` (a digit), or nullopt.
std::string read_numeral(std::string_view s, std::size_t start, bool negative) {
  std::string integral;
  std::size_t i = start;
  while (i < s.size() && is_digit(s[i])) integral += s[i++];
  // Thousands separators only when followed by exactly three digits.
  while (i + 3 < s.size() && s[i] == ',' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
         is_digit(s[i + 3]) && (i + 4 >= s.size() || !is_digit(s[i + 4]))) {
    integral.append(s.substr(i + 1, 3));
    i += 4;
  }
  std::string fraction;
  if (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) {
    ++i;
    while (i < s.size() && is_digit(s[i])) fraction += s[i++];
  }
  while (!fraction.empty() && fraction.back() == '0') fraction.pop_back();
  const auto nz = integral.find_first_not_of('0');
  integral = nz == std::string::npos ? "0" : integral.substr(nz);
  std::string out = integral;
  if (!fraction.empty()) out += "." + fraction;
  if (negative && out != "0") out = "-" + out;
  return out;
}

}  // namespace

std::optional<char> extract_choice_letter(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i >= text.size() || text[i] < 'A' || text[i] > 'Z') return std::nullopt;
  if (i + 1 < text.size() && is_word_char(text[i + 1])) return std::nullopt;
  return text[i];
}

std::optional<std::string> normalize_generation_answer(std::string_view text) {
  const auto line = first_line_normalized(text);
  if (line.empty()) return std::nullopt;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (!is_digit(line[i])) continue;
    // Look back over an optional currency sign and minus sign: "-$5", "$-5", "-5".
    std::size_t j = i;
    bool negative = false;
    if (j > 0 && line[j - 1] == '-') {
      negative = true;
      --j;
    }
    for (std::size_t len : {1u, 2u, 3u}) {
      if (j >= len && currency_at(line, j - len) == len) {
        j -= len;
        break;
      }
    }
    if (!negative && j > 0 && line[j - 1] == '-') negative = true;
    return read_numeral(line, i, negative);
  }
  return line;
}

CanonicalAnswer canonicalize(const RawAnswer& raw, const Question& question,
                             const PromptVariant& variant) {
  require(raw.question_id == variant.question_id && raw.variant_index == variant.variant_index,
          "answer does not belong to variant");
  CanonicalAnswer out;
  out.raw_text = raw.text;
  if (!raw.ok()) return out;
  if (question.is_multiple_choice()) {
    if (const auto letter = extract_choice_letter(raw.text))
      if (const auto original = variant.decode(*letter)) out.value = CanonicalValue::choice(*original);
    return out;
  }
  if (auto normalized = normalize_generation_answer(raw.text))
    out.value = CanonicalValue::text(std::move(*normalized));
  return out;
}

std::optional<std::size_t> PredictionDistribution::index_of(const CanonicalValue& value) const {
  const auto it = std::find(support.begin(), support.end(), value);
  if (it == support.end()) return std::nullopt;
  return static_cast<std::size_t>(it - support.begin());
}

PredictionDistribution empirical_distribution(std::span<const CanonicalValue> answers,
                                              std::string question_id) {
  if (answers.empty())
    fail(ErrorCode::EmptyAnswerSet, "no answers for question '" + question_id + "'");
  PredictionDistribution dist;
  dist.question_id = std::move(question_id);
  dist.n = answers.size();
  for (const auto& a : answers) {
    if (const auto k = dist.index_of(a)) {
      ++dist.counts[*k];
    } else {
      dist.support.push_back(a);
      dist.counts.push_back(1);
    }
  }
  dist.probs.reserve(dist.counts.size());
  const auto n = static_cast<double>(dist.n);
  for (auto c : dist.counts) dist.probs.push_back(static_cast<double>(c) / n);
  return dist;
}

double entropy_score(const PredictionDistribution& dist) {
  double h = 0.0;
  for (double p : dist.probs)
    if (p > 0.0) h -= p * std::log(p);
  // Unanimous answers give exactly 0, not -0.
  return h <= 0.0 ? 0.0 : h;
}

void ThresholdPolicy::validate() const {
  if (!(percentile > 0.0 && percentile <= 100.0))
    fail(ErrorCode::InvalidConfig, "percentile must lie in (0, 100]");
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    fail(ErrorCode::InvalidConfig, "temperature must be positive");
}

double select_threshold(std::span<const double> entropies, const ThresholdPolicy& policy) {
  if (entropies.empty()) fail(ErrorCode::EmptyInput, "no entropy values to threshold");
  policy.validate();
  std::vector<double> sorted(entropies.begin(), entropies.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(policy.percentile * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::vector<double> reliability_weights(const PredictionDistribution& dist,
                                        std::span<const CanonicalValue> answers,
                                        double temperature) {
  require(temperature > 0.0, "temperature must be positive");
  const double peak = *std::max_element(dist.probs.begin(), dist.probs.end());
  std::vector<double> support_weight(dist.probs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    support_weight[k] = std::exp((dist.probs[k] - peak) / temperature);
    total += support_weight[k];
  }
  for (auto& w : support_weight) w /= total;

  std::vector<double> out;
  out.reserve(answers.size());
  for (const auto& a : answers) {
    const auto k = dist.index_of(a);
    if (!k) fail(ErrorCode::UnknownAnswer, "answer '" + a.label() + "' is not in the support");
    out.push_back(support_weight[*k]);
  }
  return out;
}

ScoredQuestion score_question(std::string question_id, std::vector<CanonicalValue> answers,
                              double temperature) {
  ScoredQuestion scored;
  scored.distribution = empirical_distribution(answers, question_id);
  scored.entropy = entropy_score(scored.distribution);
  scored.per_variant_weight = reliability_weights(scored.distribution, answers, temperature);
  scored.answers = std::move(answers);
  scored.question_id = std::move(question_id);
  return scored;
}

std::vector<ScoredQuestion> filter_by_uncertainty(std::vector<ScoredQuestion> scored,
                                                  double tau) {
  for (auto& q : scored) q.retained = q.entropy <= tau;
  return scored;
}

}  // namespace relialign
