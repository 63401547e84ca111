// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "relialign/error.hpp"
#include "relialign/random.hpp"

namespace relialign {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad field '") + key + "': " + e.what());
  }
}

Split parse_split(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  if (s == "test") return Split::Test;
  fail(ErrorCode::ParseError, "unknown split '" + s + "'");
}

QuestionKind parse_kind(const std::string& s) {
  if (s == "mc") return QuestionKind::MultipleChoice;
  if (s == "gen") return QuestionKind::Generation;
  fail(ErrorCode::ParseError, "unknown kind '" + s + "'");
}

}  // namespace

std::string_view to_string(Split split) noexcept {
  switch (split) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "val";
}

std::string_view to_string(QuestionKind kind) noexcept {
  return kind == QuestionKind::MultipleChoice ? "mc" : "gen";
}

std::vector<Question> DatasetBundle::all() const {
  std::vector<Question> out;
  out.reserve(size());
  out.insert(out.end(), train.begin(), train.end());
  out.insert(out.end(), val.begin(), val.end());
  out.insert(out.end(), test.begin(), test.end());
  return out;
}

Json canonical_to_json(const CanonicalValue& value) {
  if (value.is_choice()) return value.choice_index();
  if (value.is_text()) return value.text_value();
  return nullptr;
}

CanonicalValue canonical_from_json(const Json& j) {
  if (j.is_null()) return CanonicalValue::unparseable();
  if (j.is_number_unsigned()) return CanonicalValue::choice(j.get<std::size_t>());
  if (j.is_string()) return CanonicalValue::text(j.get<std::string>());
  fail(ErrorCode::ParseError, "bad canonical answer: " + j.dump());
}

Json question_to_json(const Question& q) {
  Json j;
  j["id"] = q.id;
  j["kind"] = to_string(q.kind);
  j["stem"] = q.stem;
  j["choices"] = q.choices;
  j["gold"] = q.gold ? canonical_to_json(*q.gold) : Json(nullptr);
  j["subject"] = q.subject ? Json(*q.subject) : Json(nullptr);
  j["split"] = to_string(q.split);
  return j;
}

Question question_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "question record must be an object");
  Question q;
  q.id = field<std::string>(j, "id");
  q.kind = parse_kind(field<std::string>(j, "kind"));
  q.stem = field<std::string>(j, "stem");
  if (j.contains("choices")) q.choices = field<std::vector<std::string>>(j, "choices");
  if (j.contains("gold") && !j["gold"].is_null()) {
    const auto& g = j["gold"];
    if (q.is_multiple_choice() && !g.is_number_unsigned())
      fail(ErrorCode::ParseError, "question '" + q.id + "': gold must be a choice index");
    if (!q.is_multiple_choice() && !g.is_string())
      fail(ErrorCode::ParseError, "question '" + q.id + "': gold must be a string");
    q.gold = canonical_from_json(g);
  }
  if (j.contains("subject") && !j["subject"].is_null())
    q.subject = field<std::string>(j, "subject");
  q.split = parse_split(field<std::string>(j, "split"));
  q.validate();
  return q;
}

DatasetBundle load_questions(const std::filesystem::path& path) {
  const auto records = read_jsonl(path);
  if (records.empty()) fail(ErrorCode::EmptyCorpus, path.string() + " holds no questions");
  DatasetBundle bundle;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < records.size(); ++i) {
    Question q;
    try {
      q = question_from_json(records[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError) throw;
      fail(ErrorCode::ParseError, path.string() + ": record " + std::to_string(i + 1) + ": " +
                                      e.what());
    }
    if (!ids.insert(q.id).second) fail(ErrorCode::DuplicateId, "duplicate question id '" + q.id + "'");
    switch (q.split) {
      case Split::Train: bundle.train.push_back(std::move(q)); break;
      case Split::Val: bundle.val.push_back(std::move(q)); break;
      case Split::Test: bundle.test.push_back(std::move(q)); break;
    }
  }
  return bundle;
}

void save_questions(const std::filesystem::path& path, const DatasetBundle& bundle) {
  std::vector<Json> records;
  for (const auto& q : bundle.all()) records.push_back(question_to_json(q));
  write_jsonl_atomic(path, records);
}

Json variant_to_json(const PromptVariant& v) {
  Json j;
  j["question_id"] = v.question_id;
  j["variant_index"] = v.variant_index;
  j["rendered_prompt"] = v.rendered_prompt;
  if (v.decode_map.empty()) {
    j["decode_map"] = "identity";
  } else {
    Json map = Json::object();
    for (std::size_t pos = 0; pos < v.decode_map.size(); ++pos)
      map[std::string(1, display_letter(pos))] = v.decode_map[pos];
    j["decode_map"] = map;
  }
  if (v.padded) j["padded"] = true;
  return j;
}

PromptVariant variant_from_json(const Json& j) {
  PromptVariant v;
  v.question_id = field<std::string>(j, "question_id");
  v.variant_index = field<std::size_t>(j, "variant_index");
  v.rendered_prompt = field<std::string>(j, "rendered_prompt");
  const auto& map = j.at("decode_map");
  if (map.is_object()) {
    v.decode_map.resize(map.size());
    std::vector<bool> seen(map.size(), false);
    for (std::size_t pos = 0; pos < map.size(); ++pos) {
      const auto key = std::string(1, display_letter(pos));
      if (!map.contains(key)) fail(ErrorCode::ParseError, "decode_map lacks letter " + key);
      const auto original = map[key].get<std::size_t>();
      if (original >= map.size() || seen[original])
        fail(ErrorCode::ParseError, "decode_map is not a bijection");
      seen[original] = true;
      v.decode_map[pos] = original;
    }
  } else if (!(map.is_string() && map.get<std::string>() == "identity")) {
    fail(ErrorCode::ParseError, "decode_map must be an object or \"identity\"");
  }
  v.padded = j.value("padded", false);
  return v;
}

Json answer_to_json(const RawAnswer& a) {
  Json j;
  j["question_id"] = a.question_id;
  j["variant_index"] = a.variant_index;
  j["text"] = a.text;
  j["latency_ms"] = round_sig9(a.latency_ms);
  j["attempt_count"] = a.attempt_count;
  if (a.error) j["error"] = {{"code", to_string(a.error->code)}, {"message", a.error->message}};
  return j;
}

RawAnswer answer_from_json(const Json& j) {
  RawAnswer a;
  a.question_id = field<std::string>(j, "question_id");
  a.variant_index = field<std::size_t>(j, "variant_index");
  a.text = field<std::string>(j, "text");
  a.latency_ms = j.value("latency_ms", 0.0);
  a.attempt_count = j.value("attempt_count", std::size_t{1});
  if (j.contains("error")) {
    QueryFailure failure;
    const auto code = j["error"].value("code", std::string("HttpError"));
    failure.code = code == "Timeout"             ? ErrorCode::Timeout
                   : code == "MalformedResponse" ? ErrorCode::MalformedResponse
                                                 : ErrorCode::HttpError;
    failure.message = j["error"].value("message", std::string{});
    a.error = std::move(failure);
  }
  return a;
}

Json scored_to_json(const ScoredQuestion& s, double tau) {
  Json support = Json::array();
  for (std::size_t k = 0; k < s.distribution.support.size(); ++k)
    support.push_back({{"answer", canonical_to_json(s.distribution.support[k])},
                       {"prob", round_sig9(s.distribution.probs[k])},
                       {"count", s.distribution.counts[k]}});
  Json weights = Json::array();
  for (double w : s.per_variant_weight) weights.push_back(round_sig9(w));
  Json answers = Json::array();
  for (const auto& a : s.answers) answers.push_back(canonical_to_json(a));

  Json j;
  j["question_id"] = s.question_id;
  j["n"] = s.n();
  j["support"] = std::move(support);
  j["entropy"] = round_sig9(s.entropy);
  j["tau"] = round_sig9(tau);
  j["retained"] = s.retained;
  j["per_variant_weight"] = std::move(weights);
  j["per_variant_answer"] = std::move(answers);
  return j;
}

ScoredQuestion scored_from_json(const Json& j) {
  ScoredQuestion s;
  s.question_id = field<std::string>(j, "question_id");
  s.distribution.question_id = s.question_id;
  s.distribution.n = field<std::size_t>(j, "n");
  for (const auto& entry : j.at("support")) {
    s.distribution.support.push_back(canonical_from_json(entry.at("answer")));
    s.distribution.probs.push_back(entry.at("prob").get<double>());
    s.distribution.counts.push_back(entry.value("count", std::size_t{0}));
  }
  s.entropy = field<double>(j, "entropy");
  s.retained = field<bool>(j, "retained");
  s.per_variant_weight = field<std::vector<double>>(j, "per_variant_weight");
  for (const auto& a : j.at("per_variant_answer")) s.answers.push_back(canonical_from_json(a));
  if (s.answers.size() != s.distribution.n || s.per_variant_weight.size() != s.distribution.n)
    fail(ErrorCode::ParseError, "scored record '" + s.question_id + "' is inconsistent");
  return s;
}

Json example_to_json(const WeightedExample& e) {
  Json j;
  j["question_id"] = e.question_id;
  j["variant_index"] = e.variant_index;
  j["prompt"] = e.prompt;
  j["completion"] = e.completion;
  j["weight"] = round_sig9(e.weight);
  return j;
}

WeightedExample example_from_json(const Json& j) {
  WeightedExample e;
  e.question_id = field<std::string>(j, "question_id");
  e.variant_index = field<std::size_t>(j, "variant_index");
  e.prompt = field<std::string>(j, "prompt");
  e.completion = field<std::string>(j, "completion");
  e.weight = field<double>(j, "weight");
  if (!(e.weight > 0.0 && e.weight <= 1.0))
    fail(ErrorCode::ParseError, "example weight must lie in (0, 1]");
  return e;
}

EmitMode parse_emit_mode(std::string_view name) {
  if (name == "naive") return EmitMode::Naive;
  if (name == "filtered") return EmitMode::Filtered;
  if (name == "reweighted") return EmitMode::Reweighted;
  if (name == "gold") return EmitMode::Gold;
  fail(ErrorCode::InvalidConfig, "unknown emit mode '" + std::string(name) + "'");
}

std::string_view to_string(EmitMode mode) noexcept {
  switch (mode) {
    case EmitMode::Naive: return "naive";
    case EmitMode::Filtered: return "filtered";
    case EmitMode::Reweighted: return "reweighted";
    case EmitMode::Gold: return "gold";
  }
  return "naive";
}

std::string render_completion(const CanonicalValue& value, const Question& question) {
  if (value.is_choice()) return question.choices.at(value.choice_index());
  if (value.is_text()) return value.text_value();
  return "<unparseable>";
}

std::vector<WeightedExample> emit_weighted_sft(std::span<const ScoredQuestion> scored,
                                               std::span<const PromptVariant> variants,
                                               std::span<const Question> questions,
                                               EmitMode mode) {
  std::map<std::pair<std::string, std::size_t>, const PromptVariant*> by_key;
  for (const auto& v : variants) by_key[{v.question_id, v.variant_index}] = &v;
  std::unordered_map<std::string, const Question*> by_id;
  for (const auto& q : questions) by_id[q.id] = &q;

  auto variant = [&](const std::string& id, std::size_t index) -> const PromptVariant& {
    const auto it = by_key.find({id, index});
    require(it != by_key.end(),
            "no variant " + std::to_string(index) + " for question '" + id + "'");
    return *it->second;
  };
  auto question = [&](const std::string& id) -> const Question& {
    const auto it = by_id.find(id);
    require(it != by_id.end(), "unknown question '" + id + "'");
    return *it->second;
  };

  std::vector<WeightedExample> out;
  auto push = [&](const ScoredQuestion& s, std::size_t i, const CanonicalValue& label, double w) {
    const auto& v = variant(s.question_id, i);
    out.push_back({s.question_id, i, v.rendered_prompt, render_completion(label, question(s.question_id)),
                   w});
  };

  for (const auto& s : scored) {
    switch (mode) {
      case EmitMode::Naive:
        push(s, 0, s.answers.at(0), 1.0);
        break;
      case EmitMode::Filtered:
        if (s.retained)
          for (std::size_t i = 0; i < s.n(); ++i) push(s, i, s.answers[i], 1.0);
        break;
      case EmitMode::Reweighted:
        for (std::size_t i = 0; i < s.n(); ++i) push(s, i, s.answers[i], s.per_variant_weight.at(i));
        break;
      case EmitMode::Gold: {
        const auto& q = question(s.question_id);
        if (!q.gold) fail(ErrorCode::MissingGold, "question '" + q.id + "' has no gold answer");
        push(s, 0, *q.gold, 1.0);
        break;
      }
    }
  }
  if (out.empty())
    fail(ErrorCode::EmptyTrainingSet,
         "mode '" + std::string(to_string(mode)) + "' produced no training examples");
  return out;
}

std::vector<WeightedExample> sample_to_budget(std::span<const WeightedExample> examples,
                                              std::size_t budget, std::uint64_t seed) {
  require(budget >= 1, "sampling budget must be at least 1");
  if (budget >= examples.size()) return {examples.begin(), examples.end()};
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "sample_to_budget"));
  for (std::size_t i = 0; i < budget; ++i)
    std::swap(order[i], order[i + uniform_below(rng, order.size() - i)]);
  order.resize(budget);
  std::sort(order.begin(), order.end());
  std::vector<WeightedExample> out;
  out.reserve(budget);
  for (auto i : order) out.push_back(examples[i]);
  return out;
}

}  // namespace relialign
