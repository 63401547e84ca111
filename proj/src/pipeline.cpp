// Copyright 2026 The relialign Authors
// SPDX-License-Identifier: Apache-2.0

#include "relialign/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <unordered_map>

#include "relialign/error.hpp"
#include "relialign/kernels.hpp"
#include "relialign/random.hpp"

namespace relialign {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

fs::path in_run(const fs::path& run_dir, std::string_view file) { return run_dir / file; }

std::pair<std::string, std::string> digest_of(const fs::path& run_dir, std::string_view file) {
  return {std::string(file), sha256_file(in_run(run_dir, file))};
}

using VariantKey = std::pair<std::string, std::size_t>;

struct Indexed {
  std::unordered_map<std::string, const Question*> questions;
  std::map<VariantKey, const PromptVariant*> variants;
  std::map<VariantKey, const RawAnswer*> answers;
};

Indexed index_all(std::span<const Question> questions, std::span<const PromptVariant> variants,
                  std::span<const RawAnswer> answers) {
  Indexed ix;
  for (const auto& q : questions) ix.questions[q.id] = &q;
  for (const auto& v : variants) ix.variants[{v.question_id, v.variant_index}] = &v;
  for (const auto& a : answers) ix.answers[{a.question_id, a.variant_index}] = &a;
  return ix;
}

/// Canonical answers of every variant of each question in `split`, in
/// variant order. Questions with a failed or missing answer are dropped.
std::vector<kernels::AnswerGroup> group_answers(std::span<const Question> questions,
                                                std::span<const PromptVariant> variants,
                                                std::span<const RawAnswer> answers, Split split) {
  const auto ix = index_all(questions, variants, answers);
  std::vector<kernels::AnswerGroup> groups;
  std::vector<bool> complete;
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& q : questions) {
    if (q.split != split) continue;
    slot[q.id] = groups.size();
    groups.push_back({q.id, {}});
    complete.push_back(true);
  }
  for (const auto& [key, v] : ix.variants) {
    const auto s = slot.find(key.first);
    if (s == slot.end()) continue;
    const auto a = ix.answers.find(key);
    if (a == ix.answers.end() || !a->second->ok()) {
      complete[s->second] = false;
      continue;
    }
    groups[s->second].answers.push_back(
        canonicalize(*a->second, *ix.questions.at(key.first), *v).value);
  }
  std::vector<kernels::AnswerGroup> out;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (complete[i] && !groups[i].answers.empty()) out.push_back(std::move(groups[i]));
  return out;
}

struct ScoreOutcome {
  std::vector<ScoredQuestion> scored;
  double tau = 0.0;
};

ScoreOutcome score_split(std::span<const Question> questions, std::span<const PromptVariant> variants,
                         std::span<const RawAnswer> answers, const ThresholdPolicy& policy) {
  policy.validate();
  if (answers.empty()) fail(ErrorCode::EmptyAnswerSet, "answers file holds no answers");
  const auto groups = group_answers(questions, variants, answers, Split::Val);
  if (groups.empty()) fail(ErrorCode::EmptyAnswerSet, "no val-split question has a complete answer set");
  auto scored = kernels::score_all(groups, policy.temperature, kernels::Exec::Parallel);
  std::vector<double> entropies;
  for (const auto& s : scored) entropies.push_back(s.entropy);
  ScoreOutcome out;
  out.tau = select_threshold(entropies, policy);
  out.scored = filter_by_uncertainty(std::move(scored), out.tau);
  return out;
}

std::vector<Question> questions_of(const DatasetBundle& bundle, Split split) {
  switch (split) {
    case Split::Train: return bundle.train;
    case Split::Val: return bundle.val;
    case Split::Test: return bundle.test;
  }
  return {};
}

std::vector<Question> with_gold(std::vector<Question> qs) {
  std::erase_if(qs, [](const Question& q) { return !q.gold; });
  return qs;
}

double weak_accuracy(std::span<const Question> test, std::span<const PromptVariant> variants,
                     std::span<const RawAnswer> answers) {
  const auto ix = index_all(test, variants, answers);
  std::vector<CanonicalValue> predicted, gold;
  for (const auto& q : test) {
    const auto v = ix.variants.find({q.id, 0});
    const auto a = ix.answers.find({q.id, 0});
    require(v != ix.variants.end() && a != ix.answers.end(),
            "no unmodified-prompt answer for test question '" + q.id + "'");
    predicted.push_back(canonicalize(*a->second, q, *v->second).value);
    gold.push_back(*q.gold);
  }
  return accuracy(predicted, gold);
}

template <typename T, typename F>
std::vector<T> read_records(const fs::path& path, F&& parse) {
  std::vector<T> out;
  for (const auto& j : read_jsonl(path)) out.push_back(parse(j));
  return out;
}

std::vector<PromptVariant> read_variants(const fs::path& run_dir) {
  return read_records<PromptVariant>(in_run(run_dir, kVariantsFile), variant_from_json);
}
std::vector<RawAnswer> read_answers(const fs::path& run_dir) {
  return read_records<RawAnswer>(in_run(run_dir, kAnswersFile), answer_from_json);
}
std::vector<ScoredQuestion> read_scored(const fs::path& run_dir) {
  return read_records<ScoredQuestion>(in_run(run_dir, kScoredFile), scored_from_json);
}

Json endpoint_json(const EndpointConfig& e) {
  return {{"base_url", e.base_url},
          {"model", e.model_name},
          {"api_key_env", e.api_key_env},
          {"max_parallel_requests", e.max_parallel_requests},
          {"timeout_s", e.timeout_s},
          {"retries", e.retries},
          {"backoff_base_s", e.backoff_base_s}};
}

Json train_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"seed", c.seed}};
}

std::optional<Method> method_for(EmitMode mode, bool sampled) {
  switch (mode) {
    case EmitMode::Naive: return Method::Naive;
    case EmitMode::Filtered: return sampled ? Method::FilteredSampled : Method::Filtered;
    case EmitMode::Reweighted: return sampled ? Method::ReweightedSampled : Method::Reweighted;
    case EmitMode::Gold: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

// --- digests and manifest --------------------------------------------------

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::IoError, "sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text(path)); }

RunManifest RunManifest::open(const fs::path& run_dir, std::uint64_t seed) {
  RunManifest m;
  m.run_dir_ = run_dir;
  m.seed_ = seed;
  m.run_id_ = hex64(derive_seed(seed, "run"));
  std::error_code ec;
  fs::create_directories(run_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create run directory " + run_dir.string());
  const auto path = in_run(run_dir, kManifestFile);
  if (!fs::exists(path)) return m;
  try {
    const auto j = Json::parse(read_text(path));
    m.run_id_ = j.at("run_id").get<std::string>();
    m.seed_ = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("stages")) {
      StageRecord r;
      r.name = s.at("name").get<std::string>();
      r.config = s.at("config");
      for (const auto& [k, v] : s.at("inputs").items()) r.inputs.emplace_back(k, v.get<std::string>());
      for (const auto& [k, v] : s.at("outputs").items()) r.outputs.emplace_back(k, v.get<std::string>());
      m.stages_.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return m;
}

const StageRecord* RunManifest::stage(std::string_view name) const {
  for (const auto& s : stages_)
    if (s.name == name) return &s;
  return nullptr;
}

void RunManifest::verify(std::string_view file) const {
  const auto path = in_run(run_dir_, file);
  if (!fs::exists(path))
    fail(ErrorCode::MissingStage, "missing stage file " + path.string());
  for (const auto& s : stages_)
    for (const auto& [name, digest] : s.outputs)
      if (name == file && sha256_file(path) != digest)
        fail(ErrorCode::DigestMismatch,
             std::string(file) + " changed since stage '" + s.name + "' wrote it");
}

void RunManifest::complete(StageRecord record) {
  const auto it = std::find_if(stages_.begin(), stages_.end(),
                               [&](const StageRecord& s) { return s.name == record.name; });
  if (it != stages_.end())
    *it = std::move(record);
  else
    stages_.push_back(std::move(record));
  save();
}

Json RunManifest::to_json() const {
  Json stages = Json::array();
  Json config = Json::object();
  for (const auto& s : stages_) {
    Json inputs = Json::object(), outputs = Json::object();
    for (const auto& [k, v] : s.inputs) inputs[k] = v;
    for (const auto& [k, v] : s.outputs) outputs[k] = v;
    stages.push_back({{"name", s.name},
                      {"status", "completed"},
                      {"config", s.config},
                      {"inputs", std::move(inputs)},
                      {"outputs", std::move(outputs)}});
    config[s.name] = s.config;
  }
  Json j;
  j["run_id"] = run_id_;
  j["seed"] = seed_;
  j["config"] = std::move(config);
  j["stages"] = std::move(stages);
  return j;
}

void RunManifest::save() const {
  write_text_atomic(in_run(run_dir_, kManifestFile), to_json().dump(2) + "\n");
}

// --- stages ------------------------------------------------------------------

void cmd_variate(const fs::path& run_dir, std::uint64_t seed, const VariateOptions& opts) {
  auto manifest = RunManifest::open(run_dir, seed);
  const auto bundle = load_questions(opts.questions);
  auto plan = opts.plan;
  plan.seed = seed;

  std::unique_ptr<ExternalParaphraser> external;
  if (plan.paraphrase_source == ParaphraseSource::ExternalProvider) {
    if (!opts.paraphrase_endpoint)
      fail(ErrorCode::ProviderUnavailable, "external paraphrasing needs an endpoint");
    external = std::make_unique<ExternalParaphraser>(*opts.paraphrase_endpoint);
  }
  std::vector<Json> records;
  for (const auto split : {Split::Val, Split::Test})
    for (const auto& q : questions_of(bundle, split))
      for (const auto& v : generate_variants(q, plan, external.get()))
        records.push_back(variant_to_json(v));

  save_questions(in_run(run_dir, kQuestionsFile), bundle);
  write_jsonl_atomic(in_run(run_dir, kVariantsFile), records);

  StageRecord r{"variate", {}, {}, {}};
  r.config = {{"seed", seed},
              {"n_variants", plan.n_variants},
              {"paraphrase_source",
               plan.paraphrase_source == ParaphraseSource::RuleBased ? "rule" : "external"}};
  if (opts.paraphrase_endpoint) r.config["endpoint"] = endpoint_json(*opts.paraphrase_endpoint);
  r.inputs.emplace_back(opts.questions.string(), sha256_file(opts.questions));
  r.outputs = {digest_of(run_dir, kQuestionsFile), digest_of(run_dir, kVariantsFile)};
  manifest.complete(std::move(r));
}

void cmd_query(const fs::path& run_dir, std::uint64_t seed, const QueryOptions& opts) {
  auto manifest = RunManifest::open(run_dir, seed);
  manifest.verify(kQuestionsFile);
  manifest.verify(kVariantsFile);
  const auto bundle = load_questions(in_run(run_dir, kQuestionsFile));
  const auto variants = read_variants(run_dir);

  StageRecord r{"query", {}, {}, {}};
  std::vector<RawAnswer> answers;
  switch (opts.backend) {
    case QueryBackend::Simulated: {
      auto cfg = opts.simulated;
      cfg.seed = seed;
      answers = simulate_supervisor(variants, bundle.all(), cfg);
      r.config = {{"backend", "simulated"},
                  {"seed", seed},
                  {"alpha", cfg.alpha},
                  {"beta", cfg.beta},
                  {"variant_sensitivity", cfg.variant_sensitivity},
                  {"fixed_competence", cfg.fixed_competence ? Json(*cfg.fixed_competence) : Json()}};
      break;
    }
    case QueryBackend::Mock: {
      const auto server = run_mock_server(parse_mock_script(read_text(opts.mock_script)));
      auto cfg = opts.endpoint;
      cfg.base_url = server->base_url();
      if (cfg.model_name.empty()) cfg.model_name = "mock";
      answers = query_supervisor(variants, cfg);
      auto shown = endpoint_json(cfg);
      shown.erase("base_url");
      r.config = {{"backend", "mock"}, {"endpoint", std::move(shown)}};
      r.inputs.emplace_back(opts.mock_script.string(), sha256_file(opts.mock_script));
      break;
    }
    case QueryBackend::Endpoint:
      answers = query_supervisor(variants, opts.endpoint);
      r.config = {{"backend", "endpoint"}, {"endpoint", endpoint_json(opts.endpoint)}};
      break;
  }
  r.config["record_latency"] = opts.record_latency;
  if (!opts.record_latency)
    for (auto& a : answers) a.latency_ms = 0.0;

  std::vector<Json> records;
  for (const auto& a : answers) records.push_back(answer_to_json(a));
  write_jsonl_atomic(in_run(run_dir, kAnswersFile), records);

  r.inputs.insert(r.inputs.begin(),
                  {digest_of(run_dir, kQuestionsFile), digest_of(run_dir, kVariantsFile)});
  r.outputs = {digest_of(run_dir, kAnswersFile)};
  manifest.complete(std::move(r));
}

void cmd_score(const fs::path& run_dir, std::uint64_t seed, const ThresholdPolicy& policy) {
  auto manifest = RunManifest::open(run_dir, seed);
  for (auto f : {kQuestionsFile, kVariantsFile, kAnswersFile}) manifest.verify(f);
  const auto bundle = load_questions(in_run(run_dir, kQuestionsFile));
  const auto variants = read_variants(run_dir);
  const auto answers = read_answers(run_dir);
  const auto outcome = score_split(bundle.all(), variants, answers, policy);

  std::vector<Json> records;
  for (const auto& s : outcome.scored) records.push_back(scored_to_json(s, outcome.tau));
  write_jsonl_atomic(in_run(run_dir, kScoredFile), records);

  StageRecord r{"score", {}, {}, {}};
  r.config = {{"percentile", policy.percentile}, {"temperature", policy.temperature}};
  r.inputs = {digest_of(run_dir, kQuestionsFile), digest_of(run_dir, kVariantsFile),
              digest_of(run_dir, kAnswersFile)};
  r.outputs = {digest_of(run_dir, kScoredFile)};
  manifest.complete(std::move(r));
}

void cmd_emit(const fs::path& run_dir, std::uint64_t seed, const EmitOptions& opts) {
  auto manifest = RunManifest::open(run_dir, seed);
  for (auto f : {kQuestionsFile, kVariantsFile, kScoredFile}) manifest.verify(f);
  const auto bundle = load_questions(in_run(run_dir, kQuestionsFile));
  const auto variants = read_variants(run_dir);
  const auto scored = read_scored(run_dir);
  auto examples = emit_weighted_sft(scored, variants, bundle.all(), opts.mode);
  if (opts.budget) examples = sample_to_budget(examples, *opts.budget, seed);

  std::vector<Json> records;
  for (const auto& e : examples) records.push_back(example_to_json(e));
  write_jsonl_atomic(in_run(run_dir, kExamplesFile), records);

  StageRecord r{"emit", {}, {}, {}};
  r.config = {{"mode", to_string(opts.mode)},
              {"budget", opts.budget ? Json(*opts.budget) : Json()},
              {"seed", seed}};
  r.inputs = {digest_of(run_dir, kQuestionsFile), digest_of(run_dir, kVariantsFile),
              digest_of(run_dir, kScoredFile)};
  r.outputs = {digest_of(run_dir, kExamplesFile)};
  manifest.complete(std::move(r));
}

void cmd_train(const fs::path& run_dir, std::uint64_t seed, TrainConfig cfg) {
  auto manifest = RunManifest::open(run_dir, seed);
  manifest.verify(kExamplesFile);
  cfg.seed = seed;
  cfg.validate();
  const auto examples = read_records<WeightedExample>(in_run(run_dir, kExamplesFile), example_from_json);
  std::vector<TrainLogEntry> log;
  const auto trained = train_on_examples(examples, cfg, {}, &log);

  write_text_atomic(in_run(run_dir, kModelFile), model_to_json(trained).dump() + "\n");
  std::vector<Json> records;
  for (const auto& e : log)
    records.push_back({{"step", e.step}, {"epoch", e.epoch}, {"loss", round_sig9(e.loss)}});
  write_jsonl_atomic(in_run(run_dir, kTrainLogFile), records);

  StageRecord r{"train", train_json(cfg), {}, {}};
  r.inputs = {digest_of(run_dir, kExamplesFile)};
  r.outputs = {digest_of(run_dir, kModelFile), digest_of(run_dir, kTrainLogFile)};
  manifest.complete(std::move(r));
}

EvalReport cmd_eval(const fs::path& run_dir, std::uint64_t seed, const EvalOptions& opts) {
  auto manifest = RunManifest::open(run_dir, seed);
  for (auto f : {kQuestionsFile, kVariantsFile, kAnswersFile, kModelFile}) manifest.verify(f);
  const bool have_scored = fs::exists(in_run(run_dir, kScoredFile));
  if (have_scored) manifest.verify(kScoredFile);
  if (!opts.ceiling_model && !opts.ceiling_accuracy)
    fail(ErrorCode::InvalidConfig, "eval needs --ceiling-model or --ceiling-accuracy");

  const auto bundle = load_questions(in_run(run_dir, kQuestionsFile));
  const auto variants = read_variants(run_dir);
  const auto answers = read_answers(run_dir);
  const auto test = with_gold(bundle.test);
  if (test.empty()) fail(ErrorCode::MissingGold, "no test questions with a gold answer");

  const auto model = model_from_json(Json::parse(read_text(in_run(run_dir, kModelFile))));
  EvalReport report;
  report.weak = weak_accuracy(test, variants, answers);
  if (opts.ceiling_model) {
    const auto ceiling = model_from_json(Json::parse(read_text(*opts.ceiling_model)));
    report.ceiling = model_accuracy(ceiling, test, variants, opts.max_len);
  } else {
    require(*opts.ceiling_accuracy >= 0.0 && *opts.ceiling_accuracy <= 1.0,
            "ceiling accuracy must lie in [0, 1]");
    report.ceiling = *opts.ceiling_accuracy;
  }

  auto method = opts.method;
  if (!method)
    if (const auto* emit = manifest.stage("emit"))
      method = method_for(parse_emit_mode(emit->config.at("mode").get<std::string>()),
                          !emit->config.at("budget").is_null());
  if (method) report.set(*method, model_accuracy(model, test, variants, opts.max_len));

  std::optional<EntropyBucketReport> buckets;
  std::optional<ReliabilityMatrixReport> matrix;
  if (have_scored) {
    const auto scored = read_scored(run_dir);
    const auto gold = gold_index(bundle.val);
    const bool all_gold = std::all_of(scored.begin(), scored.end(), [&](const ScoredQuestion& s) {
      return gold.contains(s.question_id);
    });
    if (all_gold && !scored.empty()) {
      buckets = entropy_bucket_report(scored, gold, opts.buckets);
      matrix = reliability_matrix_report(scored, gold);
    }
  }
  write_reports(run_dir, report, buckets ? &*buckets : nullptr, matrix ? &*matrix : nullptr);

  StageRecord r{"eval", {}, {}, {}};
  r.config = {{"buckets", opts.buckets},
              {"max_len", opts.max_len},
              {"method", method ? Json(method_key(*method)) : Json()},
              {"ceiling_accuracy", opts.ceiling_accuracy ? Json(*opts.ceiling_accuracy) : Json()}};
  r.inputs = {digest_of(run_dir, kQuestionsFile), digest_of(run_dir, kVariantsFile),
              digest_of(run_dir, kAnswersFile), digest_of(run_dir, kModelFile)};
  if (have_scored) r.inputs.push_back(digest_of(run_dir, kScoredFile));
  if (opts.ceiling_model)
    r.inputs.emplace_back(opts.ceiling_model->string(), sha256_file(*opts.ceiling_model));
  r.outputs = {digest_of(run_dir, kReportJsonFile), digest_of(run_dir, kReportMdFile)};
  manifest.complete(std::move(r));
  return report;
}

void write_reports(const fs::path& dir, const EvalReport& report,
                   const EntropyBucketReport* buckets, const ReliabilityMatrixReport* matrix) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  write_text_atomic(in_run(dir, kReportJsonFile), full_report_json(report, buckets, matrix).dump(2) + "\n");
  write_text_atomic(in_run(dir, kReportMdFile), render_markdown(report, buckets, matrix));
}

// --- evaluation helpers --------------------------------------------------------

CanonicalValue canonical_from_completion(std::string_view completion, const Question& question) {
  if (question.is_multiple_choice()) {
    for (std::size_t i = 0; i < question.choices.size(); ++i)
      if (render_completion(CanonicalValue::choice(i), question) == completion)
        return CanonicalValue::choice(i);
    return CanonicalValue::unparseable();
  }
  if (auto normalized = normalize_generation_answer(completion))
    return CanonicalValue::text(std::move(*normalized));
  return CanonicalValue::unparseable();
}

double model_accuracy(const TrainedModel& model, std::span<const Question> test,
                      std::span<const PromptVariant> variants, std::size_t max_len) {
  std::map<std::string, const PromptVariant*> first;
  for (const auto& v : variants)
    if (v.variant_index == 0) first[v.question_id] = &v;
  std::vector<CanonicalValue> predicted, gold;
  for (const auto& q : test) {
    require(q.gold.has_value(), "test question '" + q.id + "' has no gold answer");
    const auto it = first.find(q.id);
    require(it != first.end(), "no unmodified prompt for test question '" + q.id + "'");
    predicted.push_back(
        canonical_from_completion(predict_completion(model, it->second->rendered_prompt, max_len), q));
    gold.push_back(*q.gold);
  }
  return accuracy(predicted, gold);
}

// --- simulation ----------------------------------------------------------------

DatasetBundle synthetic_corpus(std::size_t n_questions, std::size_t n_choices,
                               std::size_t n_features, std::uint64_t seed) {
  require(n_questions >= 2, "simulation needs at least two questions");
  require(n_choices >= kMinChoices && n_choices <= kMaxChoices, "choice count out of range");
  require(n_features >= 1, "simulation needs at least one feature");
  Rng rng(derive_seed(seed, "corpus"));
  std::vector<std::size_t> truth(n_features);
  for (auto& t : truth) t = uniform_below(rng, n_choices);

  const auto width = std::to_string(n_questions - 1).size();
  DatasetBundle bundle;
  for (std::size_t i = 0; i < n_questions; ++i) {
    const auto feature = uniform_below(rng, n_features);
    std::vector<std::size_t> order(n_choices);
    for (std::size_t k = 0; k < n_choices; ++k) order[k] = k;
    for (std::size_t k = n_choices; k > 1; --k) std::swap(order[k - 1], order[uniform_below(rng, k)]);

    Question q;
    auto id = std::to_string(i);
    q.id = "sim-" + std::string(width - id.size(), '0') + id;
    q.kind = QuestionKind::MultipleChoice;
    q.stem = "Which value is recorded for item f" + std::to_string(feature);
    for (std::size_t k = 0; k < n_choices; ++k) {
      q.choices.push_back("v" + std::to_string(order[k]));
      if (order[k] == truth[feature]) q.gold = CanonicalValue::choice(k);
    }
    q.split = i < n_questions / 2 ? Split::Val : Split::Test;
    (q.split == Split::Val ? bundle.val : bundle.test).push_back(std::move(q));
  }
  return bundle;
}

SimulationResult cmd_simulate(std::uint64_t seed, const SimulateOptions& opts) {
  const auto bundle = synthetic_corpus(opts.n_questions, opts.n_choices, opts.n_features, seed);
  const auto questions = bundle.all();

  VariationPlan plan;
  plan.n_variants = opts.n_variants;
  plan.seed = seed;
  std::vector<PromptVariant> variants;
  for (const auto& q : questions) {
    auto vs = generate_variants(q, plan);
    variants.insert(variants.end(), std::make_move_iterator(vs.begin()),
                    std::make_move_iterator(vs.end()));
  }

  auto supervisor = opts.supervisor;
  supervisor.seed = seed;
  const auto answers = simulate_supervisor(variants, questions, supervisor);
  const auto scored = score_split(questions, variants, answers, opts.policy).scored;

  auto cfg = opts.train;
  cfg.seed = seed;
  auto fit = [&](const std::vector<WeightedExample>& examples) {
    return model_accuracy(train_on_examples(examples, cfg), bundle.test, variants);
  };
  auto emit = [&](EmitMode mode) { return emit_weighted_sft(scored, variants, questions, mode); };
  const auto budget = bundle.val.size();

  SimulationResult result;
  result.report.weak = weak_accuracy(bundle.test, variants, answers);
  result.report.ceiling = fit(emit(EmitMode::Gold));
  result.report.set(Method::Naive, fit(emit(EmitMode::Naive)));
  const auto filtered = emit(EmitMode::Filtered);
  result.report.set(Method::FilteredSampled,
                    fit(sample_to_budget(filtered, budget, derive_seed(seed, "filtered"))));
  result.report.set(Method::Filtered, fit(filtered));
  const auto reweighted = emit(EmitMode::Reweighted);
  result.report.set(Method::ReweightedSampled,
                    fit(sample_to_budget(reweighted, budget, derive_seed(seed, "reweighted"))));
  result.report.set(Method::Reweighted, fit(reweighted));

  const auto gold = gold_index(bundle.val);
  result.buckets = entropy_bucket_report(scored, gold, opts.buckets);
  result.matrix = reliability_matrix_report(scored, gold);
  return result;
}

}  // namespace relialign
